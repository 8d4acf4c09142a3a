//! Fashion-MNIST ingestion, PCA compression and the on-disk dataset cache.

pub mod cache;
pub mod dataset;
pub mod idx;
pub mod pca;

pub use cache::{dataset_hash, read_cache, write_cache, write_csv};
pub use dataset::{build_dataset, DatasetOptions, PreparedDataset};
pub use idx::{load_images, parse_idx, IdxTensor, RawImage};
pub use pca::{fit_pca, PcaModel};
