//! Compensated accumulation and order-stable parallel reduction.
//!
//! Parallel sums are split into fixed-size index chunks whose size does not
//! depend on the thread count. Each chunk is reduced with a compensated
//! accumulator and the partial sums are merged left to right, so results
//! are bit-identical across runs and machines with the same float semantics.

use rayon::prelude::*;

use crate::Complex;

/// Chunk length used by the parallel reductions.
pub const CHUNK: usize = 256;

/// Neumaier (improved Kahan) summation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator into this one.
    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.add(other.sum);
        self.add(other.carry);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of complex values (components summed independently).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn merge(&mut self, other: &Self) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    #[inline]
    pub fn value(&self) -> Complex {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl FromIterator<Complex> for ComplexSum {
    fn from_iter<I: IntoIterator<Item = Complex>>(iter: I) -> Self {
        let mut acc = Self::new();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Convenience wrapper: compensated sum of an iterator of reals.
pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

/// Reduces `0..len` in parallel with a per-chunk accumulator.
///
/// `chunk_fn(range, acc)` fills the accumulator for one chunk; `merge`
/// combines partial accumulators. Chunks are merged in index order.
pub fn ordered_par_reduce<A, F, M>(len: usize, chunk_fn: F, merge: M) -> A
where
    A: Default + Send,
    F: Fn(std::ops::Range<usize>, &mut A) + Sync,
    M: Fn(&mut A, &A),
{
    let n_chunks = len.div_ceil(CHUNK);
    let partials: Vec<A> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = A::default();
            let lo = c * CHUNK;
            chunk_fn(lo..(lo + CHUNK).min(len), &mut acc);
            acc
        })
        .collect();
    let mut total = A::default();
    for p in &partials {
        merge(&mut total, p);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_lost_bits() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn neumaier_handles_large_late_term() {
        let s = sum([1.0, 1e100, 1.0, -1e100]);
        assert_eq!(s, 2.0);
    }

    #[test]
    fn parallel_reduction_is_order_stable() {
        let values: Vec<f64> = (0..10_000).map(|i| ((i as f64) * 0.37).sin() * 1e-3).collect();
        let run = || {
            ordered_par_reduce(
                values.len(),
                |r, acc: &mut CompensatedSum| {
                    for i in r {
                        acc.add(values[i]);
                    }
                },
                |a, b| a.merge(b),
            )
            .value()
        };
        let a = run();
        for _ in 0..5 {
            assert_eq!(a.to_bits(), run().to_bits());
        }
        assert!((a - sum(values.iter().copied())).abs() < 1e-15);
    }
}
