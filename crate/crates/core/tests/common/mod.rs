//! Shared oracles and random generators for the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use gzorbit_core::{GaussRat, Mat, Scalar, Spectrum, Tolerance};
use rand::Rng;

pub type Q = GaussRat;

pub fn q(v: i64) -> Q {
    Q::from_i64(v)
}

fn padd(a: &mut Vec<Q>, b: &[Q], sign: bool) {
    if a.len() < b.len() {
        a.resize(b.len(), Q::zero());
    }
    for (k, v) in b.iter().enumerate() {
        a[k] = if sign { a[k].clone() - v.clone() } else { a[k].clone() + v.clone() };
    }
}

fn pmul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Laplace expansion along the first row, memoised on the set of used
/// columns. Entries are polynomials (ascending coefficients).
pub fn cofactor_det(a: &[Vec<Vec<Q>>]) -> Vec<Q> {
    fn go(a: &[Vec<Vec<Q>>], mask: u32, memo: &mut HashMap<u32, Vec<Q>>) -> Vec<Q> {
        let n = a.len();
        let r = mask.count_ones() as usize;
        if r == n {
            return vec![Q::one()];
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let mut acc = vec![Q::zero()];
        let mut pos = 0;
        for c in 0..n {
            if mask >> c & 1 == 1 {
                continue;
            }
            if a[r][c].iter().any(|v| !v.is_exact_zero()) {
                let minor = go(a, mask | 1 << c, memo);
                padd(&mut acc, &pmul(&a[r][c], &minor), pos % 2 == 1);
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
    go(a, 0, &mut HashMap::new())
}

/// Full coefficient list (ascending, leading one included) of `det(t - x)`.
pub fn cofactor_charpoly(x: &Mat<Q>) -> Vec<Q> {
    let n = x.n();
    let a: Vec<Vec<Vec<Q>>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let e = -x.get(r, c).clone();
                    if r == c {
                        vec![e, Q::one()]
                    } else {
                        vec![e]
                    }
                })
                .collect()
        })
        .collect();
    let mut p = cofactor_det(&a);
    p.resize(n + 1, Q::zero());
    p
}

/// Small Gaussian rational with integer parts in `-k..=k` and denominator 1..=d.
pub fn rand_q(rng: &mut impl Rng, k: i64, d: i64, complex: bool) -> Q {
    let den = rng.random_range(1..=d);
    let re = Q::from_ratio(rng.random_range(-k..=k), den);
    if complex && rng.random_bool(0.3) {
        re + Q::from_ratio(rng.random_range(-k..=k), den) * Q::i()
    } else {
        re
    }
}

pub fn rand_int_mat(rng: &mut impl Rng, n: usize, k: i64) -> Mat<Q> {
    Mat::from_fn(n, |_, _| q(rng.random_range(-k..=k)))
}

/// Random spectrum of degree `deg` drawn from the integers `-k..=k`, so
/// repeated and shared roots are common.
pub fn rand_int_spectrum(rng: &mut impl Rng, deg: usize, k: i64) -> Spectrum<Q> {
    let roots = (0..deg).map(|_| (q(rng.random_range(-k..=k)), 1)).collect();
    Spectrum::new(roots, &Tolerance::default()).expect("nonempty spectrum")
}

pub fn shared_count(spectra: &[Spectrum<Q>]) -> usize {
    let tol = Tolerance::default();
    gzorbit_core::choice_domains(spectra, &tol).iter().map(|d| d.len()).sum()
}

/// Level spectra of a degenerate fibre (some adjacent levels share a root)
/// with between 1 and `max_shared` shared roots in total.
pub fn degenerate_spectra(rng: &mut impl Rng, n: usize, max_shared: usize) -> Vec<Spectrum<Q>> {
    loop {
        let s: Vec<Spectrum<Q>> = (1..=n).map(|i| rand_int_spectrum(rng, i, 2)).collect();
        let j = shared_count(&s);
        if (1..=max_shared).contains(&j) {
            return s;
        }
    }
}

/// Level spectra with no shared roots between adjacent levels and at least
/// one repeated root.
pub fn theta_spectra(rng: &mut impl Rng, n: usize) -> Vec<Spectrum<Q>> {
    loop {
        let s: Vec<Spectrum<Q>> = (1..=n).map(|i| rand_int_spectrum(rng, i, 3)).collect();
        if shared_count(&s) == 0 && s.iter().any(|x| !x.is_squarefree()) {
            return s;
        }
    }
}

pub fn staircase() -> Vec<Spectrum<Q>> {
    let tol = Tolerance::default();
    (1..=3)
        .map(|i| Spectrum::new((0..i as i64).map(|r| (q(r), 1)).collect(), &tol).unwrap())
        .collect()
}
