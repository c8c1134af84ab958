//! Labeled feature banks: the in-memory container, its binary and CSV file
//! formats, and a seeded synthetic generator.

mod bank;
mod io;
mod synthetic;

pub use bank::{class_centroids, Centroids, FeatureBank, Split};
pub use io::{
    load_bank, load_binary, load_csv, read_binary, save_bank, save_csv, splits_path_for,
    write_binary, BankFormat, BINARY_HEADER_LEN, BINARY_MAGIC, BINARY_VERSION,
};
pub use synthetic::{generate_synthetic, SyntheticSpec};
