//! The binary classification task: classes 0 and 1, 550 images each, a
//! seeded 500/50 split per class, and PCA to 8 features fitted on the
//! training images only.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gqhan_core::train::Dataset;
use gqhan_core::{Label, Sample};

use super::idx::RawImage;
use super::pca::{fit_pca, PcaModel};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DatasetOptions {
    pub seed: u64,
    /// Divide pixels by 255 before PCA.
    pub scale_pixels: bool,
    /// Subtract the training mean before projecting, `C (x - mean)`. Off by
    /// default: the classifier's score is even in `x`, and centered features
    /// place the two classes roughly mirror-symmetric about the origin, which
    /// that score cannot tell apart. `C x` keeps the components and shifts
    /// every sample by the same offset `C mean`.
    pub center_features: bool,
    /// Images taken per class, in file order.
    pub per_class: usize,
    /// Of those, how many go to training.
    pub train_per_class: usize,
    pub components: usize,
    /// Source classes mapped to labels 0 and 1.
    pub classes: [u8; 2],
}

impl Default for DatasetOptions {
    fn default() -> Self {
        DatasetOptions {
            seed: 0,
            scale_pixels: false,
            center_features: false,
            per_class: 550,
            train_per_class: 500,
            components: 8,
            classes: [0, 1],
        }
    }
}

impl DatasetOptions {
    pub fn validate(&self) -> Result<()> {
        if self.classes[0] == self.classes[1] || self.classes.iter().any(|&c| c > 9) {
            return Err(Error::Config(format!("invalid class pair {:?}", self.classes)));
        }
        if self.train_per_class == 0 || self.train_per_class >= self.per_class {
            return Err(Error::Config(format!(
                "need 0 < train_per_class ({}) < per_class ({})",
                self.train_per_class, self.per_class
            )));
        }
        if self.components == 0 {
            return Err(Error::Config("PCA needs at least one component".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreparedDataset {
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
    pub pca: PcaModel,
    pub options: DatasetOptions,
}

impl PreparedDataset {
    pub fn to_split(&self) -> Dataset {
        Dataset {
            train: self.train.clone(),
            test: self.test.clone(),
        }
    }

    /// Counts of label 0 and label 1 in `(train, test)`.
    pub fn class_counts(&self) -> ([usize; 2], [usize; 2]) {
        let count = |s: &[Sample]| {
            let zeros = s.iter().filter(|x| x.label == Label::Zero).count();
            [zeros, s.len() - zeros]
        };
        (count(&self.train), count(&self.test))
    }
}

fn pixels(img: &RawImage, scale: bool) -> Vec<f64> {
    let k = if scale { 1.0 / 255.0 } else { 1.0 };
    img.pixels.iter().map(|&p| p as f64 * k).collect()
}

pub fn build_dataset(images: &[RawImage], options: &DatasetOptions) -> Result<PreparedDataset> {
    options.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut train_imgs = Vec::new();
    let mut test_imgs = Vec::new();
    for (label_bit, &class) in options.classes.iter().enumerate() {
        let picked: Vec<&RawImage> = images
            .iter()
            .filter(|img| img.label == class)
            .take(options.per_class)
            .collect();
        if picked.len() < options.per_class {
            return Err(Error::Ingest(format!(
                "class {class} has {} images, {} needed",
                picked.len(),
                options.per_class
            )));
        }
        let mut order: Vec<usize> = (0..picked.len()).collect();
        order.shuffle(&mut rng);
        let label = Label::from_class(label_bit as u8)?;
        let (tr, te) = order.split_at(options.train_per_class);
        train_imgs.extend(tr.iter().map(|&i| (picked[i], label)));
        test_imgs.extend(te.iter().map(|&i| (picked[i], label)));
    }

    let train_rows: Vec<Vec<f64>> = train_imgs
        .iter()
        .map(|(img, _)| pixels(img, options.scale_pixels))
        .collect();
    let pca = fit_pca(&train_rows, options.components)?;

    let to_sample = |row: &[f64], label: Label| -> Result<Sample> {
        let features = if options.center_features {
            pca.project(row)
        } else {
            pca.project_uncentered(row)
        };
        Sample::new(features, label).map_err(|e| {
            Error::Numerical(format!("projected sample has no amplitude encoding: {e}"))
        })
    };
    let train = train_rows
        .iter()
        .zip(&train_imgs)
        .map(|(row, (_, label))| to_sample(row, *label))
        .collect::<Result<Vec<_>>>()?;
    let test = test_imgs
        .iter()
        .map(|(img, label)| to_sample(&pixels(img, options.scale_pixels), *label))
        .collect::<Result<Vec<_>>>()?;

    Ok(PreparedDataset {
        train,
        test,
        pca,
        options: options.clone(),
    })
}
