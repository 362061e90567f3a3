//! Exact entropies and mutual informations over finite probability tables.
//!
//! Everything is in bits. Zero-probability cells are skipped when summing
//! `p log p`, so no epsilon flooring is ever applied. Tables are dense and
//! capped at [`MAX_JOINT_ENTRIES`] cells.

use crate::error::{check_range, Error, Result};

/// Absolute tolerance on the total mass of any table.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Largest dense joint table that will be built.
pub const MAX_JOINT_ENTRIES: usize = 1_000_000;

/// `-p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_range("p", p, 0.0, 1.0, "[0, 1]")?;
    Ok(h2(p))
}

/// Unchecked binary entropy for callers that have already validated `p`.
pub(crate) fn h2(p: f64) -> f64 {
    plogp(p) + plogp(1.0 - p)
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// The unique `p` in `[0, 1/2]` with `binary_entropy(p) == h`, found by
/// bisection to an absolute tolerance of 1e-10 (in practice far tighter).
pub fn binary_entropy_inverse(h: f64) -> Result<f64> {
    check_range("h", h, 0.0, 1.0, "[0, 1]")?;
    if h == 0.0 {
        return Ok(0.0);
    }
    if h == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    // h2 is strictly increasing on [0, 1/2].
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h2(mid) < h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn validate_probs(what: &str, probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what} is empty")));
    }
    let mut total = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        if !(p >= 0.0) || !p.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "{what}[{i}] = {p} is not a finite non-negative probability"
            )));
        }
        total += p;
    }
    if (total - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidDistribution(format!(
            "{what} sums to {total:.17}, not 1"
        )));
    }
    Ok(())
}

/// A probability vector over a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate_probs("pmf", &probs)?;
        Ok(Pmf { probs })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidDistribution("pmf is empty".into()));
        }
        Ok(Pmf {
            probs: vec![1.0 / size as f64; size],
        })
    }

    /// Point mass on `index`.
    pub fn degenerate(size: usize, index: usize) -> Result<Self> {
        if index >= size {
            return Err(Error::InvalidDistribution(format!(
                "point mass at {index} outside alphabet of size {size}"
            )));
        }
        let mut probs = vec![0.0; size];
        probs[index] = 1.0;
        Ok(Pmf { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Shannon entropy of a pmf in bits.
pub fn entropy(p: &Pmf) -> f64 {
    p.probs.iter().map(|&q| plogp(q)).sum()
}

fn checked_size(dims: &[usize]) -> Result<usize> {
    let mut size: usize = 1;
    for &d in dims {
        if d == 0 {
            return Err(Error::InvalidDistribution(
                "alphabet of size zero".to_string(),
            ));
        }
        size = match size.checked_mul(d) {
            Some(s) if s <= MAX_JOINT_ENTRIES => s,
            _ => {
                let approx: f64 = dims.iter().map(|&d| d as f64).product();
                return Err(Error::TableTooLarge {
                    entries: format!("{approx:e}"),
                    limit: MAX_JOINT_ENTRIES,
                });
            }
        };
    }
    Ok(size)
}

/// A memoryless channel from one input alphabet to one or more output
/// alphabets, stored as a row-stochastic table `p(outputs | input)`.
///
/// Outputs are flattened row-major, so a broadcast channel `x -> (y, z)`
/// has `output_sizes = [|Y|, |Z|]` and rows of length `|Y| * |Z|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input_size: usize,
    output_sizes: Vec<usize>,
    transition: Vec<f64>,
}

impl Channel {
    pub fn from_flat(
        input_size: usize,
        output_sizes: Vec<usize>,
        transition: Vec<f64>,
    ) -> Result<Self> {
        if output_sizes.is_empty() {
            return Err(Error::InvalidDistribution(
                "channel has no outputs".to_string(),
            ));
        }
        let mut dims = vec![input_size];
        dims.extend_from_slice(&output_sizes);
        let total = checked_size(&dims)?;
        if transition.len() != total {
            return Err(Error::LengthMismatch {
                left: transition.len(),
                right: total,
            });
        }
        let row_len = total / input_size;
        for (x, row) in transition.chunks(row_len).enumerate() {
            validate_probs(&format!("row {x}"), row)?;
        }
        Ok(Channel {
            input_size,
            output_sizes,
            transition,
        })
    }

    /// Single-output channel from its rows `p(y | x)`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let input_size = rows.len();
        let out = rows.first().map_or(0, Vec::len);
        if let Some(x) = rows.iter().position(|r| r.len() != out) {
            return Err(Error::LengthMismatch {
                left: rows[x].len(),
                right: out,
            });
        }
        Self::from_flat(input_size, vec![out], rows.concat())
    }

    /// Two-output channel from the table `p(y, z | x)` indexed `[x][y][z]`.
    pub fn broadcast(table: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let input_size = table.len();
        let ny = table.first().map_or(0, Vec::len);
        let nz = table.first().and_then(|t| t.first()).map_or(0, Vec::len);
        let mut flat = Vec::with_capacity(input_size * ny * nz);
        for plane in &table {
            if plane.len() != ny {
                return Err(Error::LengthMismatch {
                    left: plane.len(),
                    right: ny,
                });
            }
            for row in plane {
                if row.len() != nz {
                    return Err(Error::LengthMismatch {
                        left: row.len(),
                        right: nz,
                    });
                }
                flat.extend_from_slice(row);
            }
        }
        Self::from_flat(input_size, vec![ny, nz], flat)
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        check_range("crossover", p, 0.0, 1.0, "[0, 1]")?;
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Binary broadcast channel `x -> (y, z)` with independent flips of
    /// probability `eps` towards `y` and `del` towards `z`.
    pub fn bsc_pair(eps: f64, del: f64) -> Result<Self> {
        check_range("eps", eps, 0.0, 1.0, "[0, 1]")?;
        check_range("del", del, 0.0, 1.0, "[0, 1]")?;
        let flip = |p: f64, a: usize, b: usize| if a == b { 1.0 - p } else { p };
        let mut flat = Vec::with_capacity(8);
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    flat.push(flip(eps, x, y) * flip(del, x, z));
                }
            }
        }
        Self::from_flat(2, vec![2, 2], flat)
    }

    /// Channel whose outputs are uniform and independent of the input.
    pub fn useless(input_size: usize, output_sizes: Vec<usize>) -> Result<Self> {
        let out = checked_size(&output_sizes)?;
        let mut dims = vec![input_size];
        dims.extend_from_slice(&output_sizes);
        let total = checked_size(&dims)?;
        Self::from_flat(input_size, output_sizes, vec![1.0 / out as f64; total])
    }

    /// Noiseless channel on an alphabet of `size` symbols.
    pub fn identity(size: usize) -> Result<Self> {
        let rows = (0..size)
            .map(|x| (0..size).map(|y| if x == y { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(rows)
    }

    /// Serial composition `self` then `next`; `self` must have a single
    /// output whose alphabet is `next`'s input alphabet.
    pub fn compose(&self, next: &Channel) -> Result<Channel> {
        if self.output_sizes.len() != 1 || self.output_sizes[0] != next.input_size {
            return Err(Error::InvalidDistribution(format!(
                "cannot compose channel with outputs {:?} into input of size {}",
                self.output_sizes, next.input_size
            )));
        }
        let mid = next.input_size;
        let out = next.row_len();
        let mut flat = vec![0.0; self.input_size * out];
        for x in 0..self.input_size {
            for m in 0..mid {
                let pm = self.transition[x * mid + m];
                if pm == 0.0 {
                    continue;
                }
                for o in 0..out {
                    flat[x * out + o] += pm * next.transition[m * out + o];
                }
            }
        }
        // Renormalization is not applied: composed rows are within roundoff.
        Channel::from_flat(self.input_size, next.output_sizes.clone(), flat)
    }

    pub fn input_size(&self) -> usize {
        self.input_size
    }

    pub fn output_sizes(&self) -> &[usize] {
        &self.output_sizes
    }

    fn row_len(&self) -> usize {
        self.transition.len() / self.input_size
    }

    /// `p(outputs | x)`, flattened.
    pub fn row(&self, x: usize) -> &[f64] {
        let n = self.row_len();
        &self.transition[x * n..(x + 1) * n]
    }
}

/// A dense joint distribution over several finite alphabets, row-major
/// (the last axis varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl JointPmf {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDistribution("joint has no axes".into()));
        }
        let size = checked_size(&dims)?;
        if probs.len() != size {
            return Err(Error::LengthMismatch {
                left: probs.len(),
                right: size,
            });
        }
        validate_probs("joint", &probs)?;
        Ok(JointPmf { dims, probs })
    }

    /// Joint of an input pmf and the channel outputs: axes `[input, outputs...]`.
    pub fn from_input(input: &Pmf, channel: &Channel) -> Result<Self> {
        JointPmf::new(vec![input.len()], input.probs.clone())?.extend(0, channel)
    }

    /// Appends the outputs of `channel` as new trailing axes, driven by the
    /// existing axis `parent`.
    pub fn extend(&self, parent: usize, channel: &Channel) -> Result<Self> {
        if parent >= self.dims.len() {
            return Err(Error::InvalidAxes(format!(
                "parent axis {parent} out of range for {} axes",
                self.dims.len()
            )));
        }
        if self.dims[parent] != channel.input_size {
            return Err(Error::InvalidDistribution(format!(
                "axis {parent} has {} symbols but channel expects {}",
                self.dims[parent], channel.input_size
            )));
        }
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&channel.output_sizes);
        checked_size(&dims)?;
        let out = channel.row_len();
        let stride: usize = self.dims[parent + 1..].iter().product();
        let mut probs = Vec::with_capacity(self.probs.len() * out);
        for (flat, &p) in self.probs.iter().enumerate() {
            let x = (flat / stride) % self.dims[parent];
            probs.extend(channel.row(x).iter().map(|&q| p * q));
        }
        Ok(JointPmf { dims, probs })
    }

    /// Product distribution: `self`'s axes followed by `other`'s.
    pub fn product(&self, other: &JointPmf) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        checked_size(&dims)?;
        let mut probs = Vec::with_capacity(self.probs.len() * other.probs.len());
        for &p in &self.probs {
            probs.extend(other.probs.iter().map(|&q| p * q));
        }
        Ok(JointPmf { dims, probs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_axes(&self) -> usize {
        self.dims.len()
    }

    /// Marginal over `axes`, kept in the order given.
    pub fn marginal(&self, axes: &[usize]) -> Result<JointPmf> {
        self.check_axes(&[axes])?;
        if axes.is_empty() {
            return Err(Error::InvalidAxes("empty marginal".into()));
        }
        let dims: Vec<usize> = axes.iter().map(|&a| self.dims[a]).collect();
        Ok(JointPmf {
            probs: self.marginal_probs(axes),
            dims,
        })
    }

    fn marginal_probs(&self, axes: &[usize]) -> Vec<f64> {
        let n = self.dims.len();
        // Stride of each source axis inside the marginal table (0 = summed out).
        let mut sub_stride = vec![0usize; n];
        let mut acc = 1usize;
        for &a in axes.iter().rev() {
            sub_stride[a] = acc;
            acc *= self.dims[a];
        }
        let mut out = vec![0.0; acc];
        let mut coord = vec![0usize; n];
        let mut sub = 0usize;
        for &p in &self.probs {
            out[sub] += p;
            // Odometer increment over the source index, tracking `sub`.
            for k in (0..n).rev() {
                coord[k] += 1;
                sub += sub_stride[k];
                if coord[k] < self.dims[k] {
                    break;
                }
                sub -= sub_stride[k] * coord[k];
                coord[k] = 0;
            }
        }
        out
    }

    /// Joint entropy of the variables on `axes` (0 for an empty set).
    pub fn entropy_of(&self, axes: &[usize]) -> Result<f64> {
        self.check_axes(&[axes])?;
        if axes.is_empty() {
            return Ok(0.0);
        }
        Ok(self.marginal_probs(axes).iter().map(|&p| plogp(p)).sum())
    }

    fn check_axes(&self, sets: &[&[usize]]) -> Result<()> {
        let mut seen = vec![false; self.dims.len()];
        for set in sets {
            for &a in *set {
                if a >= self.dims.len() {
                    return Err(Error::InvalidAxes(format!(
                        "axis {a} out of range for {} axes",
                        self.dims.len()
                    )));
                }
                if seen[a] {
                    return Err(Error::InvalidAxes(format!(
                        "axis {a} appears more than once"
                    )));
                }
                seen[a] = true;
            }
        }
        Ok(())
    }
}

/// `I(A; B) = H(A) + H(B) - H(A, B)` for disjoint, non-empty axis sets.
pub fn mutual_information(j: &JointPmf, a: &[usize], b: &[usize]) -> Result<f64> {
    conditional_mutual_information(j, a, b, &[])
}

/// `I(A; B | C) = H(A, C) + H(B, C) - H(A, B, C) - H(C)`; `C` may be empty.
pub fn conditional_mutual_information(
    j: &JointPmf,
    a: &[usize],
    b: &[usize],
    c: &[usize],
) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidAxes(
            "mutual information needs two non-empty axis sets".into(),
        ));
    }
    j.check_axes(&[a, b, c])?;
    let join = |x: &[usize], y: &[usize]| -> Vec<usize> { x.iter().chain(y).copied().collect() };
    let ac = join(a, c);
    let bc = join(b, c);
    let abc = join(&ac, b);
    Ok(j.entropy_of(&ac)? + j.entropy_of(&bc)? - j.entropy_of(&abc)? - j.entropy_of(c)?)
}
