//! Amplitude-array kernels. Qubit `q` of an `n`-qubit register lives at bit
//! `n - 1 - q` of the basis index.

use num_complex::Complex;

use crate::scalar::{czero, Real};

/// Sparse row representation of a local operator: `rows[r]` lists `(col, value)`.
pub type SparseRows<T> = Vec<Vec<(usize, Complex<T>)>>;

#[inline]
pub fn qubit_mask(n: usize, q: usize) -> usize {
    1usize << (n - 1 - q)
}

/// Inserts a zero bit at every mask position (masks ascending) into `b`.
#[inline]
fn deposit(mut b: usize, sorted_masks: &[usize]) -> usize {
    for &m in sorted_masks {
        let low = b & (m - 1);
        b = ((b ^ low) << 1) | low;
    }
    b
}

/// Precomputed index geometry for an operator acting on `qubits`.
pub struct LocalLayout {
    sorted_masks: Vec<usize>,
    /// Global offset of each local basis index; `qubits[0]` is the most
    /// significant local bit.
    offsets: Vec<usize>,
    n_bases: usize,
}

impl LocalLayout {
    pub fn new(n: usize, qubits: &[usize]) -> Self {
        let k = qubits.len();
        let masks: Vec<usize> = qubits.iter().map(|&q| qubit_mask(n, q)).collect();
        let offsets = (0..1usize << k)
            .map(|local| {
                (0..k)
                    .filter(|&j| local >> (k - 1 - j) & 1 == 1)
                    .map(|j| masks[j])
                    .sum()
            })
            .collect();
        let mut sorted_masks = masks;
        sorted_masks.sort_unstable();
        Self {
            sorted_masks,
            offsets,
            n_bases: 1usize << (n - k),
        }
    }

    #[inline]
    pub fn bases(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_bases).map(move |b| deposit(b, &self.sorted_masks))
    }

    #[inline]
    pub fn offset(&self, local: usize) -> usize {
        self.offsets[local]
    }
}

/// Applies a 2×2 matrix to qubit `q`.
pub fn apply_single<T: Real>(amps: &mut [Complex<T>], n: usize, q: usize, m: &[[Complex<T>; 2]; 2]) {
    let mask = qubit_mask(n, q);
    for i in 0..amps.len() {
        if i & mask == 0 {
            let j = i | mask;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[j] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// Applies a 2×2 matrix to `target` on the subspace where every control is 1.
pub fn apply_controlled<T: Real>(
    amps: &mut [Complex<T>],
    n: usize,
    controls: &[usize],
    target: usize,
    m: &[[Complex<T>; 2]; 2],
) {
    let cmask: usize = controls.iter().map(|&q| qubit_mask(n, q)).sum();
    let tmask = qubit_mask(n, target);
    let mut masks: Vec<usize> = controls.iter().map(|&q| qubit_mask(n, q)).collect();
    masks.push(tmask);
    masks.sort_unstable();
    for b in 0..amps.len() >> masks.len() {
        let i = deposit(b, &masks) | cmask;
        let j = i | tmask;
        let (a0, a1) = (amps[i], amps[j]);
        amps[i] = m[0][0] * a0 + m[0][1] * a1;
        amps[j] = m[1][0] * a0 + m[1][1] * a1;
    }
}

/// Flips `target` where `control` is 1.
pub fn apply_cnot<T: Real>(amps: &mut [Complex<T>], n: usize, control: usize, target: usize) {
    let cmask = qubit_mask(n, control);
    let tmask = qubit_mask(n, target);
    for i in 0..amps.len() {
        if i & cmask != 0 && i & tmask == 0 {
            amps.swap(i, i | tmask);
        }
    }
}

/// Applies a local operator given as sparse rows. Rows equal to the identity
/// row are skipped, so operators that act nontrivially on a small subspace
/// (excitation exponentials) cost only their active rows.
pub fn apply_local<T: Real>(amps: &mut [Complex<T>], layout: &LocalLayout, rows: &SparseRows<T>) {
    let active: Vec<usize> = rows
        .iter()
        .enumerate()
        .filter(|(r, row)| !(row.len() == 1 && row[0].0 == *r && row[0].1 == Complex::new(T::one(), T::zero())))
        .map(|(r, _)| r)
        .collect();
    if active.is_empty() {
        return;
    }
    let mut buf = vec![czero::<T>(); active.len()];
    for base in layout.bases() {
        for (slot, &r) in buf.iter_mut().zip(&active) {
            *slot = rows[r]
                .iter()
                .fold(czero(), |acc, &(col, v)| acc + v * amps[base + layout.offset(col)]);
        }
        for (&val, &r) in buf.iter().zip(&active) {
            amps[base + layout.offset(r)] = val;
        }
    }
}

/// Computes `⟨bra| M |ket⟩` for a local operator `M` without materializing `M|ket⟩`.
pub fn local_matrix_element<T: Real>(
    bra: &[Complex<T>],
    ket: &[Complex<T>],
    layout: &LocalLayout,
    rows: &SparseRows<T>,
) -> Complex<T> {
    let mut acc = czero();
    for base in layout.bases() {
        for (r, row) in rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let b = bra[base + layout.offset(r)];
            if b == czero() {
                continue;
            }
            let mut s = czero();
            for &(col, v) in row {
                s += v * ket[base + layout.offset(col)];
            }
            acc += b.conj() * s;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deposit_skips_mask_bits() {
        let layout = LocalLayout::new(3, &[1]);
        let bases: Vec<usize> = layout.bases().collect();
        assert_eq!(bases, vec![0b000, 0b001, 0b100, 0b101]);
        assert_eq!(layout.offset(1), 0b010);
    }

    #[test]
    fn offsets_follow_qubit_order() {
        let layout = LocalLayout::new(4, &[3, 0]);
        // local index 0b10 sets qubits[0] = qubit 3 (global bit 0).
        assert_eq!(layout.offset(0b10), 0b0001);
        assert_eq!(layout.offset(0b01), 0b1000);
    }
}
