#!/usr/bin/env python3
"""Convert the per-class JSON blobs of the `fashion-mnist` npm package into
gzipped IDX files (the layout of the original Fashion-MNIST distribution).

Usage: npm_fashion_to_idx.py <package/src/clothes> <out_dir> [per_class]

Images are interleaved round-robin by class (0, 1, ..., 9, 0, 1, ...) so that
every class appears early in file order.
"""
import gzip
import json
import struct
import sys
from pathlib import Path


def main():
    src = Path(sys.argv[1])
    out = Path(sys.argv[2])
    per_class = int(sys.argv[3]) if len(sys.argv) > 3 else 600
    classes = [json.loads((src / f"{c}.json").read_text())["data"][:per_class] for c in range(10)]
    images, labels = [], []
    for i in range(per_class):
        for c in range(10):
            img = classes[c][i]
            assert len(img) == 784
            images.append(bytes(img))
            labels.append(c)
    out.mkdir(parents=True, exist_ok=True)
    with gzip.GzipFile(out / "train-images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 2051, len(images), 28, 28))
        f.write(b"".join(images))
    with gzip.GzipFile(out / "train-labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 2049, len(labels)))
        f.write(bytes(labels))


if __name__ == "__main__":
    main()
