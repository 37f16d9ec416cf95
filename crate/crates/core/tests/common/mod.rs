#![allow(dead_code)]

use meanforce::operator::{herm_eig, ComplexOperator, DensityMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng, dim: usize) -> ComplexOperator {
    ComplexOperator::from_fn(dim, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexOperator {
    random_complex(rng, dim).hermitian_part()
}

/// Full-rank state `G G† / Tr(G G†)`.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let g = random_complex(rng, dim);
    DensityMatrix::from_unnormalized(&(&g * &g.adjoint())).unwrap()
}

/// `e^{iH}` for a random Hermitian `H`.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexOperator {
    let h = random_hermitian(rng, dim).scale(3.0);
    herm_eig(&h).unwrap().compose_complex(|x| C64::from_polar(1.0, x))
}

/// Every permutation of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

/// Brute-force ergotropy: the passive energy is the minimum of
/// `Σ r_i e_π(i)` over every alignment `π` of the two eigenbases.
pub fn ergotropy_brute_force(rho: &DensityMatrix, h: &ComplexOperator) -> f64 {
    let r = herm_eig(rho.operator()).unwrap();
    let e = herm_eig(h).unwrap();
    let n = h.dim();
    let mut best = f64::INFINITY;
    for perm in permutations(n) {
        // P ρ P† with eigenvector |r_i⟩ sent to |e_π(i)⟩
        let energy: f64 = r
            .eigenvalues()
            .iter()
            .zip(&perm)
            .map(|(p, &j)| p * e.eigenvalues()[j])
            .sum();
        best = best.min(energy);
    }
    h.expectation(rho) - best
}

/// Naive `Tr_B` by explicit double-index summation.
pub fn partial_trace_naive(m: &ComplexOperator, ds: usize, db: usize) -> ComplexOperator {
    ComplexOperator::from_fn(ds, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for b in 0..db {
            acc += m.entry(i * db + b, j * db + b);
        }
        acc
    })
}
