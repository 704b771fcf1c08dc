#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;
use wordprobe_core::{write_embeddings, DataType, EmbeddingFormat, Representation};

pub fn word_list(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i:03}")).collect()
}

pub fn write_rep(
    path: &Path,
    name: &str,
    data_type: DataType,
    words: &[String],
    matrix: Array2<f64>,
) {
    let rep =
        Representation::from_matrix(name.to_string(), data_type, words.to_vec(), matrix).unwrap();
    write_embeddings(&rep, path, EmbeddingFormat::HeaderText).unwrap();
}

pub struct Fixture {
    pub dir: TempDir,
    pub config: PathBuf,
}

impl Fixture {
    pub fn base(&self) -> &Path {
        self.dir.path()
    }

    pub fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }
}

/// Three single-type representations over a shared 140-word vocabulary,
/// four norms (one covering too few words to probe), a frequency table,
/// and one two-member ensemble.
pub fn standard_fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path();
    let n = 140;
    let words = word_list(n);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let latent: Vec<[f64; 3]> = (0..n)
        .map(|_| {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]
        })
        .collect();

    for (file, name, data_type, seed) in [
        ("text.vec", "text-a", DataType::Text, 1u64),
        ("beh.vec", "beh-a", DataType::Behavior, 2),
        ("brain.vec", "brain-a", DataType::Brain, 3),
    ] {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let m = Array2::from_shape_fn((n, 6), |(i, j)| {
            latent[i][j % 3] + 0.3 * r.gen_range(-1.0..1.0)
        });
        write_rep(&base.join(file), name, data_type, &words, m);
    }

    fs::create_dir(base.join("norms")).unwrap();
    let mut conc = String::from("word,value\n");
    let mut noise = String::from("word,value\n");
    let mut anim = String::from("word,value\n");
    let mut tiny = String::from("word,value\n");
    let mut nrng = ChaCha8Rng::seed_from_u64(5);
    for (i, w) in words.iter().enumerate() {
        conc.push_str(&format!(
            "{w},{}\n",
            2.0 * latent[i][0] + 0.1 * nrng.gen_range(-1.0..1.0)
        ));
        noise.push_str(&format!("{w},{}\n", nrng.gen_range(-1.0..1.0)));
        anim.push_str(&format!(
            "{w},{}\n",
            if latent[i][1] > 0.0 { "animal" } else { "object" }
        ));
        if i < 30 {
            tiny.push_str(&format!("{w},{}\n", latent[i][2]));
        }
    }
    fs::write(base.join("norms/conc.csv"), conc).unwrap();
    fs::write(base.join("norms/noise.csv"), noise).unwrap();
    fs::write(base.join("norms/anim.csv"), anim).unwrap();
    fs::write(base.join("norms/tiny.csv"), tiny).unwrap();
    fs::write(
        base.join("norms/manifest.toml"),
        concat!(
            "[[norms]]\nfile = \"conc.csv\"\nname = \"conc\"\ncategory = \"semantic\"\nkind = \"numeric\"\n\n",
            "[[norms]]\nfile = \"noise.csv\"\nname = \"noise\"\ncategory = \"noise\"\nkind = \"numeric\"\n\n",
            "[[norms]]\nfile = \"anim.csv\"\nname = \"anim\"\ncategory = \"taxonomy\"\nkind = \"binary\"\nlabels = [\"animal\", \"object\"]\n\n",
            "[[norms]]\nfile = \"tiny.csv\"\nname = \"tiny\"\ncategory = \"semantic\"\nkind = \"numeric\"\n",
        ),
    )
    .unwrap();

    let mut freq = String::from("word,count\n");
    for (i, w) in words.iter().enumerate() {
        freq.push_str(&format!("{w},{}\n", 1000 / (i + 1)));
    }
    fs::write(base.join("freq.csv"), freq).unwrap();

    let config = base.join("run.toml");
    fs::write(
        &config,
        concat!(
            "seed = 11\noutput_dir = \"out\"\nnorms = \"norms/manifest.toml\"\nfrequencies = \"freq.csv\"\n\n",
            "[[representations]]\npath = \"text.vec\"\nformat = \"header-text\"\nname = \"text-a\"\ndata_type = \"text\"\n\n",
            "[[representations]]\npath = \"beh.vec\"\nformat = \"header-text\"\nname = \"beh-a\"\ndata_type = \"behavior\"\n\n",
            "[[representations]]\npath = \"brain.vec\"\nformat = \"header-text\"\nname = \"brain-a\"\ndata_type = \"brain\"\n\n",
            "[[ensembles]]\nmembers = [\"text-a\", \"beh-a\"]\nlabel = \"duo\"\n\n",
            "[report]\norder_by = \"beh-a\"\n",
        ),
    )
    .unwrap();

    Fixture { dir, config }
}
