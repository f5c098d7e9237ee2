//! Model parameters in one flat vector, addressed through a named tensor
//! layout. Keeping everything flat makes the optimizer, the checkpoint
//! format and finite-difference checking trivial.

use ndarray::{ArrayView2, ArrayViewMut2};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::vocab::Vocab;

/// MLP hidden sizes are fixed: two layers of 100 and 50 units.
pub const MLP1: usize = 100;
pub const MLP2: usize = 50;
/// Subject head classes: singular, plural.
pub const SUBJECT_CLASSES: usize = 2;
/// Object head classes: singular, plural, none.
pub const OBJECT_CLASSES: usize = 3;

/// Gate slices within the 4H dimension, in order: input, forget, cell,
/// output.
pub const GATES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDims {
    pub embed: usize,
    pub hidden: usize,
    pub n_words: usize,
    pub n_ngrams: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorSpec {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub offset: usize,
}

impl TensorSpec {
    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub specs: Vec<TensorSpec>,
    pub total: usize,
}

impl Layout {
    pub fn for_dims(dims: &ModelDims) -> Layout {
        let (e, h) = (dims.embed, dims.hidden);
        let mut specs = Vec::new();
        let mut offset = 0usize;
        let mut add = |name: &str, rows: usize, cols: usize| {
            specs.push(TensorSpec { name: name.to_string(), rows, cols, offset });
            offset += rows * cols;
        };
        add("embed.word", dims.n_words, e);
        add("embed.ngram", dims.n_ngrams, e);
        for dir in ["fwd", "bwd"] {
            add(&format!("lstm.{dir}.wx"), e, GATES * h);
            add(&format!("lstm.{dir}.wh"), h, GATES * h);
            add(&format!("lstm.{dir}.b"), 1, GATES * h);
        }
        for (head, classes) in [("subj", SUBJECT_CLASSES), ("obj", OBJECT_CLASSES)] {
            add(&format!("{head}.w1"), 2 * h, MLP1);
            add(&format!("{head}.b1"), 1, MLP1);
            add(&format!("{head}.w2"), MLP1, MLP2);
            add(&format!("{head}.b2"), 1, MLP2);
            add(&format!("{head}.w3"), MLP2, classes);
            add(&format!("{head}.b3"), 1, classes);
        }
        Layout { specs, total: offset }
    }

    pub fn spec(&self, name: &str) -> &TensorSpec {
        self.specs
            .iter()
            .find(|s| s.name == name)
            .unwrap_or_else(|| panic!("unknown tensor '{name}'"))
    }
}

/// All learnable tensors plus the vocabulary they index.
#[derive(Debug, Clone)]
pub struct ModelParams {
    pub dims: ModelDims,
    pub layout: Layout,
    pub data: Vec<f64>,
    pub vocab: Vocab,
}

pub fn view<'a>(data: &'a [f64], spec: &TensorSpec) -> ArrayView2<'a, f64> {
    ArrayView2::from_shape((spec.rows, spec.cols), &data[spec.offset..spec.offset + spec.len()])
        .expect("layout shape matches slice")
}

pub fn view_mut<'a>(data: &'a mut [f64], spec: &TensorSpec) -> ArrayViewMut2<'a, f64> {
    let range = spec.offset..spec.offset + spec.len();
    ArrayViewMut2::from_shape((spec.rows, spec.cols), &mut data[range])
        .expect("layout shape matches slice")
}

impl ModelParams {
    /// Initializes weights uniformly in ±1/√fan-in, biases at zero, and the
    /// forget-gate bias slice at 1.
    pub fn init<R: Rng>(dims: ModelDims, vocab: Vocab, rng: &mut R) -> ModelParams {
        let layout = Layout::for_dims(&dims);
        let mut data = vec![0.0f64; layout.total];
        for spec in &layout.specs {
            if spec.name.ends_with(".b") || spec.name.ends_with(".b1")
                || spec.name.ends_with(".b2") || spec.name.ends_with(".b3")
            {
                continue;
            }
            let fan_in = if spec.name.starts_with("embed.") { dims.embed } else { spec.rows };
            let bound = 1.0 / (fan_in as f64).sqrt();
            for v in &mut data[spec.offset..spec.offset + spec.len()] {
                *v = rng.gen_range(-bound..bound);
            }
        }
        for dir in ["fwd", "bwd"] {
            let spec = layout.spec(&format!("lstm.{dir}.b"));
            let h = dims.hidden;
            // forget gate is the second slice
            for v in &mut data[spec.offset + h..spec.offset + 2 * h] {
                *v = 1.0;
            }
        }
        ModelParams { dims, layout, data, vocab }
    }

    pub fn tensor(&self, name: &str) -> ArrayView2<'_, f64> {
        view(&self.data, self.layout.spec(name))
    }

    pub fn n_params(&self) -> usize {
        self.layout.total
    }
}
