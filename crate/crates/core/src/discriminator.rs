//! Feedforward classifier D(m) over fingerprint features.
//!
//! Parameters live in one flat vector, layer by layer: the weight matrix
//! stored input-major (`w[i * out + o]`) followed by the bias vector. Input
//! rows whose feature is zero are skipped, which makes fingerprint inputs
//! cheap in both directions.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng as _;

use crate::chem::Perceived;
use crate::fingerprint::{morgan_fp_perceived, DEFAULT_RADIUS, DEFAULT_WIDTH};
use crate::math::{ln, powi, sigmoid, sqrt};
use crate::{MoleculeGraph, Rng};

pub const BCE_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Self {
        FeatureVector { values }
    }

    pub fn zeros(width: usize) -> Self {
        FeatureVector { values: vec![0.0; width] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn width(&self) -> usize {
        self.values.len()
    }

    pub fn nonzero_count(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }
}

/// Folded Morgan fingerprint as a {0, 1} vector.
pub fn featurize(mol: &MoleculeGraph) -> FeatureVector {
    featurize_perceived(&Perceived::new(mol))
}

pub fn featurize_perceived(p: &Perceived<'_>) -> FeatureVector {
    let fp = morgan_fp_perceived(p, DEFAULT_RADIUS, DEFAULT_WIDTH).expect("default width is nonzero");
    let mut values = vec![0.0; DEFAULT_WIDTH];
    for i in fp.ones() {
        values[i] = 1.0;
    }
    FeatureVector { values }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Architecture {
    /// Sigmoid hidden layers of the given widths.
    Mlp(Vec<usize>),
    /// Input wired straight to the output unit.
    Logistic,
}

impl Architecture {
    pub fn default_mlp() -> Self {
        Architecture::Mlp(vec![100, 10])
    }

    fn widths(&self, input: usize) -> Vec<usize> {
        let mut w = vec![input];
        if let Architecture::Mlp(hidden) = self {
            w.extend_from_slice(hidden);
        }
        w.push(1);
        w
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hyperparams {
    pub learning_rate: f64,
    pub weight_decay: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams { learning_rate: 1e-3, weight_decay: 1e-4, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelConvention {
    /// Reference molecules are 1, population members are 0.
    Original,
    Flipped,
}

impl LabelConvention {
    pub fn labels(self) -> (f64, f64) {
        match self {
            LabelConvention::Original => (1.0, 0.0),
            LabelConvention::Flipped => (0.0, 1.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DiscriminatorError {
    WidthMismatch { expected: usize, found: usize },
    EmptyBatch,
    NonFiniteLoss(f64),
    Checkpoint(&'static str),
}

impl fmt::Display for DiscriminatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscriminatorError::WidthMismatch { expected, found } => {
                write!(f, "feature width {found} does not match model input width {expected}")
            }
            DiscriminatorError::EmptyBatch => write!(f, "training batch is empty"),
            DiscriminatorError::NonFiniteLoss(l) => write!(f, "training diverged: loss is {l}"),
            DiscriminatorError::Checkpoint(why) => write!(f, "bad checkpoint: {why}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DiscriminatorError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct LayerShape {
    inputs: usize,
    outputs: usize,
    offset: usize,
}

impl LayerShape {
    fn weight(&self, i: usize, o: usize) -> usize {
        self.offset + i * self.outputs + o
    }

    fn bias(&self, o: usize) -> usize {
        self.offset + self.inputs * self.outputs + o
    }

    fn len(&self) -> usize {
        (self.inputs + 1) * self.outputs
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminatorModel {
    architecture: Architecture,
    hyper: Hyperparams,
    layers: Vec<LayerShape>,
    params: Vec<f64>,
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
}

fn shapes(widths: &[usize]) -> Vec<LayerShape> {
    let mut offset = 0;
    widths
        .windows(2)
        .map(|w| {
            let s = LayerShape { inputs: w[0], outputs: w[1], offset };
            offset += s.len();
            s
        })
        .collect()
}

impl DiscriminatorModel {
    /// Glorot uniform init scaled by 4 for sigmoid units, biases at 0. The
    /// logistic variant starts from all zeros.
    pub fn new(architecture: Architecture, input_width: usize, hyper: Hyperparams, rng: &mut Rng) -> Self {
        let layers = shapes(&architecture.widths(input_width));
        let n = layers.iter().map(LayerShape::len).sum();
        let mut model = DiscriminatorModel {
            architecture,
            hyper,
            layers,
            params: vec![0.0; n],
            m: vec![0.0; n],
            v: vec![0.0; n],
            step: 0,
        };
        model.reinitialize(rng);
        model
    }

    /// All parameters zero and fresh optimizer state.
    pub fn zeroed(architecture: Architecture, input_width: usize, hyper: Hyperparams) -> Self {
        let layers = shapes(&architecture.widths(input_width));
        let n = layers.iter().map(LayerShape::len).sum();
        DiscriminatorModel { architecture, hyper, layers, params: vec![0.0; n], m: vec![0.0; n], v: vec![0.0; n], step: 0 }
    }

    pub fn reinitialize(&mut self, rng: &mut Rng) {
        self.params.fill(0.0);
        // The logistic model is convex, so it starts from zero.
        let random = if self.architecture == Architecture::Logistic { 0 } else { self.layers.len() };
        for s in &self.layers[..random] {
            let bound = 4.0 * sqrt(6.0 / (s.inputs + s.outputs) as f64);
            for p in &mut self.params[s.offset..s.offset + s.inputs * s.outputs] {
                *p = rng.gen_range(-bound..bound);
            }
            self.params[s.bias(0)..s.bias(0) + s.outputs].fill(0.0);
        }
        self.m.fill(0.0);
        self.v.fill(0.0);
        self.step = 0;
    }

    pub fn architecture(&self) -> &Architecture {
        &self.architecture
    }

    pub fn hyperparams(&self) -> Hyperparams {
        self.hyper
    }

    pub fn input_width(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    /// Layer widths, input first.
    pub fn widths(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.layers.iter().map(|l| l.inputs).collect();
        w.push(1);
        w
    }

    /// Whether parameter `i` is a weight (and so subject to decay).
    pub fn is_weight(&self, i: usize) -> bool {
        self.layers.iter().any(|s| i >= s.offset && i < s.offset + s.inputs * s.outputs)
    }

    /// Index of weight (i, o) of layer `l` in the flat parameter vector.
    pub fn weight_index(&self, l: usize, i: usize, o: usize) -> usize {
        self.layers[l].weight(i, o)
    }

    pub fn bias_index(&self, l: usize, o: usize) -> usize {
        self.layers[l].bias(o)
    }

    fn check(&self, x: &FeatureVector) -> Result<(), DiscriminatorError> {
        if x.width() != self.input_width() {
            return Err(DiscriminatorError::WidthMismatch { expected: self.input_width(), found: x.width() });
        }
        Ok(())
    }

    /// Activations of every layer, input excluded.
    fn activations(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len());
        for (l, s) in self.layers.iter().enumerate() {
            let input: &[f64] = if l == 0 { x } else { &acts[l - 1] };
            let mut z: Vec<f64> = self.params[s.bias(0)..s.bias(0) + s.outputs].to_vec();
            for (i, &xi) in input.iter().enumerate() {
                if xi == 0.0 {
                    continue;
                }
                let row = &self.params[s.weight(i, 0)..s.weight(i, 0) + s.outputs];
                for (zo, w) in z.iter_mut().zip(row) {
                    *zo += w * xi;
                }
            }
            for zo in &mut z {
                *zo = sigmoid(*zo);
            }
            acts.push(z);
        }
        acts
    }

    pub fn forward(&self, x: &FeatureVector) -> Result<f64, DiscriminatorError> {
        self.check(x)?;
        Ok(self.activations(&x.values).last().unwrap()[0])
    }

    /// Mean BCE of the batch without touching any state.
    pub fn loss(&self, batch: &[(&FeatureVector, f64)]) -> Result<f64, DiscriminatorError> {
        if batch.is_empty() {
            return Err(DiscriminatorError::EmptyBatch);
        }
        let mut total = 0.0;
        for (x, y) in batch {
            total += bce(self.forward(x)?, *y);
        }
        Ok(total / batch.len() as f64)
    }

    /// Mean BCE and its gradient with respect to every parameter, weight
    /// decay excluded.
    pub fn gradients(&self, batch: &[(&FeatureVector, f64)]) -> Result<(f64, Vec<f64>), DiscriminatorError> {
        if batch.is_empty() {
            return Err(DiscriminatorError::EmptyBatch);
        }
        let mut grad = vec![0.0; self.params.len()];
        let mut total = 0.0;
        let scale = 1.0 / batch.len() as f64;
        for (x, y) in batch {
            self.check(x)?;
            let acts = self.activations(&x.values);
            let p = acts.last().unwrap()[0];
            total += bce(p, *y);
            let dl_dp = -(y / (p + BCE_EPS)) + (1.0 - y) / (1.0 - p + BCE_EPS);
            let mut delta = vec![dl_dp * p * (1.0 - p) * scale];
            for l in (0..self.layers.len()).rev() {
                let s = self.layers[l];
                let input: &[f64] = if l == 0 { &x.values } else { &acts[l - 1] };
                for (o, d) in delta.iter().enumerate() {
                    grad[s.bias(o)] += d;
                }
                for (i, &xi) in input.iter().enumerate() {
                    if xi == 0.0 {
                        continue;
                    }
                    for (o, d) in delta.iter().enumerate() {
                        grad[s.weight(i, o)] += d * xi;
                    }
                }
                if l > 0 {
                    delta = input
                        .iter()
                        .enumerate()
                        .map(|(i, &a)| {
                            let back: f64 = (0..s.outputs).map(|o| self.params[s.weight(i, o)] * delta[o]).sum();
                            back * a * (1.0 - a)
                        })
                        .collect();
                }
            }
        }
        Ok((total * scale, grad))
    }

    /// One Adam step on mean BCE plus L2 on weights. Returns the loss
    /// before the update.
    pub fn train_step(&mut self, batch: &[(&FeatureVector, f64)]) -> Result<f64, DiscriminatorError> {
        let (loss, mut grad) = self.gradients(batch)?;
        if !loss.is_finite() {
            return Err(DiscriminatorError::NonFiniteLoss(loss));
        }
        for s in &self.layers {
            for i in s.offset..s.offset + s.inputs * s.outputs {
                grad[i] += self.hyper.weight_decay * self.params[i];
            }
        }
        self.apply_adam(&grad);
        Ok(loss)
    }

    /// Adam update with a caller-supplied gradient.
    pub fn apply_adam(&mut self, grad: &[f64]) {
        let h = self.hyper;
        self.step += 1;
        let t = self.step.min(i32::MAX as u64) as i32;
        let c1 = 1.0 - powi(h.beta1, t);
        let c2 = 1.0 - powi(h.beta2, t);
        for (((p, m), v), g) in self.params.iter_mut().zip(&mut self.m).zip(&mut self.v).zip(grad) {
            *m = h.beta1 * *m + (1.0 - h.beta1) * g;
            *v = h.beta2 * *v + (1.0 - h.beta2) * g * g;
            *p -= h.learning_rate * (*m / c1) / (sqrt(*v / c2) + h.eps);
        }
    }

    /// Serializes architecture, parameters and optimizer state.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(CHECKPOINT_MAGIC);
        push_u32(&mut out, CHECKPOINT_VERSION);
        out.push(match self.architecture {
            Architecture::Mlp(_) => 0,
            Architecture::Logistic => 1,
        });
        let widths = self.widths();
        push_u32(&mut out, widths.len() as u32);
        for w in widths {
            push_u32(&mut out, w as u32);
        }
        let h = self.hyper;
        for x in [h.learning_rate, h.weight_decay, h.beta1, h.beta2, h.eps] {
            out.extend_from_slice(&x.to_bits().to_le_bytes());
        }
        out.extend_from_slice(&self.step.to_le_bytes());
        for vec in [&self.params, &self.m, &self.v] {
            for x in vec {
                out.extend_from_slice(&x.to_bits().to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DiscriminatorError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(CHECKPOINT_MAGIC.len())? != CHECKPOINT_MAGIC {
            return Err(DiscriminatorError::Checkpoint("wrong magic"));
        }
        if r.u32()? != CHECKPOINT_VERSION {
            return Err(DiscriminatorError::Checkpoint("unsupported version"));
        }
        let kind = r.take(1)?[0];
        let n = r.u32()? as usize;
        if !(2..=64).contains(&n) {
            return Err(DiscriminatorError::Checkpoint("bad layer count"));
        }
        let mut widths = Vec::with_capacity(n);
        for _ in 0..n {
            widths.push(r.u32()? as usize);
        }
        if widths[n - 1] != 1 || widths.iter().any(|&w| w == 0) {
            return Err(DiscriminatorError::Checkpoint("bad layer widths"));
        }
        let architecture = match kind {
            0 => Architecture::Mlp(widths[1..n - 1].to_vec()),
            1 if n == 2 => Architecture::Logistic,
            _ => return Err(DiscriminatorError::Checkpoint("bad architecture")),
        };
        let hyper = Hyperparams {
            learning_rate: r.f64()?,
            weight_decay: r.f64()?,
            beta1: r.f64()?,
            beta2: r.f64()?,
            eps: r.f64()?,
        };
        let step = r.u64()?;
        let layers = shapes(&widths);
        let count: usize = layers.iter().map(LayerShape::len).sum();
        if r.bytes.len() - r.pos != count * 24 {
            return Err(DiscriminatorError::Checkpoint("parameter block has the wrong size"));
        }
        let mut read_vec = || (0..count).map(|_| r.f64()).collect::<Result<Vec<f64>, _>>();
        let params = read_vec()?;
        let m = read_vec()?;
        let v = read_vec()?;
        Ok(DiscriminatorModel { architecture, hyper, layers, params, m, v, step })
    }
}

pub fn bce(p: f64, y: f64) -> f64 {
    -(y * ln(p + BCE_EPS) + (1.0 - y) * ln(1.0 - p + BCE_EPS))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrainSchedule {
    pub batch_size: usize,
    pub epochs: usize,
}

impl Default for TrainSchedule {
    fn default() -> Self {
        TrainSchedule { batch_size: 256, epochs: 10 }
    }
}

/// Trains on reference (label 1 under the original convention) against
/// population (label 0) for `schedule.epochs` shuffled passes. Returns the
/// mean loss of the last epoch.
pub fn train_generation(
    model: &mut DiscriminatorModel,
    reference: &[FeatureVector],
    population: &[FeatureVector],
    convention: LabelConvention,
    schedule: TrainSchedule,
    rng: &mut Rng,
) -> Result<f64, DiscriminatorError> {
    if reference.is_empty() || population.is_empty() {
        return Err(DiscriminatorError::EmptyBatch);
    }
    let (ref_label, pop_label) = convention.labels();
    let mut data: Vec<(&FeatureVector, f64)> = reference
        .iter()
        .map(|x| (x, ref_label))
        .chain(population.iter().map(|x| (x, pop_label)))
        .collect();
    let batch_size = schedule.batch_size.max(1);
    let mut last = 0.0;
    for _ in 0..schedule.epochs {
        shuffle(&mut data, rng);
        let mut sum = 0.0;
        let mut weight = 0usize;
        for batch in data.chunks(batch_size) {
            sum += model.train_step(batch)? * batch.len() as f64;
            weight += batch.len();
        }
        last = sum / weight as f64;
    }
    Ok(last)
}

/// Fisher-Yates with the crate generator, so the order depends only on
/// the seed.
pub fn shuffle<T>(items: &mut [T], rng: &mut Rng) {
    for i in (1..items.len()).rev() {
        let j = rng.gen_range(0..=i);
        items.swap(i, j);
    }
}

const CHECKPOINT_MAGIC: &[u8] = b"MOLGADSC";
const CHECKPOINT_VERSION: u32 = 1;

fn push_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_le_bytes());
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], DiscriminatorError> {
        if self.pos + n > self.bytes.len() {
            return Err(DiscriminatorError::Checkpoint("truncated"));
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, DiscriminatorError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, DiscriminatorError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, DiscriminatorError> {
        Ok(f64::from_bits(self.u64()?))
    }
}
