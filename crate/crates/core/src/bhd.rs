//! Balanced homodyne detection: a 50:50 beamsplitter followed by photon
//! counting on both outputs.
//!
//! Outputs are `c = (a + b)/√2` and `d = (a − b)/√2`. An outcome is labelled
//! by `2j = n_c + n_d` and `2m = n_c − n_d`. Quadrature `x̂ = (â + â†)/√2`.

use std::f64::consts::PI;

use num_rational::Ratio;

use crate::frames::{poisson_weights, coherent_cutoff};
use crate::linalg::{ln_factorial, C64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BhdOutcome {
    pub twice_j: u32,
    pub twice_m: i32,
    pub probability: f64,
}

impl BhdOutcome {
    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn m(&self) -> f64 {
        self.twice_m as f64 / 2.0
    }

    pub fn n_c(&self) -> u32 {
        ((self.twice_j as i32 + self.twice_m) / 2) as u32
    }
}

/// Whether `(2j, 2m)` labels a physical outcome.
pub fn valid_outcome(twice_j: u32, twice_m: i32) -> bool {
    twice_m.unsigned_abs() <= twice_j && (twice_j as i32 + twice_m) % 2 == 0
}

/// Truncated coherent amplitudes `e^{-s²/2} (s e^{iφ})^k / √k!`, not renormalized.
pub fn coherent_amplitudes(amplitude: f64, phase: f64, cutoff: usize) -> Vec<C64> {
    poisson_weights(amplitude, cutoff)
        .iter()
        .enumerate()
        .map(|(k, p)| C64::from_polar(p.sqrt(), k as f64 * phase))
        .collect()
}

/// Phase-eigenstate amplitudes `(s+1)^{-1/2} e^{ikφ}`.
pub fn phase_eigenstate_amplitudes(cutoff: usize, phase: f64) -> Vec<C64> {
    let r = 1.0 / ((cutoff + 1) as f64).sqrt();
    (0..=cutoff).map(|k| C64::from_polar(r, k as f64 * phase)).collect()
}

/// Cutoff for a coherent input retaining all but `1e-14` of its mass.
pub fn oracle_cutoff(amplitude: f64) -> usize {
    coherent_cutoff(amplitude, 1.0 - 1e-14)
}

/// Direct simulation of the beamsplitter on a product input.
///
/// Returns, for each total photon number `N`, the output amplitudes indexed
/// by `n_c` (with `n_d = N − n_c`). Each input Fock state is built with the
/// creation-operator recursion `a† = (c† + d†)/√2`, `b† = (c† − d†)/√2`.
pub fn beamsplitter_output(psi_a: &[C64], psi_b: &[C64]) -> Vec<Vec<C64>> {
    let (na, nb) = (psi_a.len(), psi_b.len());
    let max_n = na + nb - 2;
    let mut out: Vec<Vec<C64>> = (0..=max_n).map(|n| vec![ZERO; n + 1]).collect();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let raise = |v: &[C64], sign: f64, norm: f64| -> Vec<C64> {
        let n = v.len() - 1;
        let mut w = vec![ZERO; n + 2];
        for (nc, amp) in v.iter().enumerate() {
            // c† |nc, n−nc⟩ and d† |nc, n−nc⟩.
            w[nc + 1] += amp * (r * ((nc + 1) as f64).sqrt() / norm);
            w[nc] += amp * (sign * r * ((n - nc + 1) as f64).sqrt() / norm);
        }
        w
    };
    // States |n_a, 0⟩ for all n_a, then raise the b mode.
    let mut column = vec![C64::from(1.0)];
    for (ka, amp_a) in psi_a.iter().enumerate() {
        if ka > 0 {
            column = raise(&column, 1.0, (ka as f64).sqrt());
        }
        let mut state = column.clone();
        for (kb, amp_b) in psi_b.iter().enumerate() {
            if kb > 0 {
                state = raise(&state, -1.0, (kb as f64).sqrt());
            }
            let coeff = amp_a * amp_b;
            if coeff == ZERO {
                continue;
            }
            for (slot, s) in out[ka + kb].iter_mut().zip(&state) {
                *slot += coeff * s;
            }
        }
    }
    out
}

/// Oracle outcome table `P(2j, 2m)` for a product input.
pub fn oracle_distribution(psi_a: &[C64], psi_b: &[C64]) -> Vec<BhdOutcome> {
    let out = beamsplitter_output(psi_a, psi_b);
    let mut table = Vec::new();
    for (n, amps) in out.iter().enumerate() {
        for (nc, a) in amps.iter().enumerate() {
            table.push(BhdOutcome {
                twice_j: n as u32,
                twice_m: 2 * nc as i32 - n as i32,
                probability: a.norm_sqr(),
            });
        }
    }
    table
}

/// Look up `P(2j, 2m)` in an oracle table (0 when absent).
pub fn lookup(table: &[BhdOutcome], twice_j: u32, twice_m: i32) -> f64 {
    // Tables from `oracle_distribution` are ordered by (2j, n_c).
    let start = (twice_j as usize) * (twice_j as usize + 1) / 2;
    let nc = (twice_j as i32 + twice_m) / 2;
    table
        .get(start + nc as usize)
        .filter(|o| o.twice_j == twice_j && o.twice_m == twice_m)
        .map(|o| o.probability)
        .unwrap_or(0.0)
}

/// Two coherent inputs `s_A e^{ia}`, `s_B e^{ib}`:
/// `e^{−s_A²−s_B²} 2^{−2j} |α+β|^{2(j+m)} |α−β|^{2(j−m)} / ((j+m)!(j−m)!)`.
pub fn bhd_two_coherent(s_a: f64, a: f64, s_b: f64, b: f64, twice_j: u32, twice_m: i32) -> f64 {
    if !valid_outcome(twice_j, twice_m) {
        return 0.0;
    }
    let alpha = C64::from_polar(s_a, a);
    let beta = C64::from_polar(s_b, b);
    let nc = ((twice_j as i32 + twice_m) / 2) as u64;
    let nd = ((twice_j as i32 - twice_m) / 2) as u64;
    let term = |z: f64, k: u64| if k == 0 { 0.0 } else { 2.0 * k as f64 * z.ln() };
    let ln = -s_a * s_a - s_b * s_b - twice_j as f64 * 2f64.ln() + term((alpha + beta).norm(), nc)
        + term((alpha - beta).norm(), nd)
        - ln_factorial(nc)
        - ln_factorial(nd);
    ln.exp()
}

/// Equal amplitudes: Poisson(2s²) in `2j` times a binomial in
/// `cos²((b−a)/2)` for `j + m`.
pub fn bhd_equal_coherent(s: f64, a: f64, b: f64, twice_j: u32, twice_m: i32) -> f64 {
    if !valid_outcome(twice_j, twice_m) {
        return 0.0;
    }
    let n = twice_j as u64;
    let k = ((twice_j as i32 + twice_m) / 2) as u64;
    let c2 = ((b - a) / 2.0).cos().powi(2);
    let s2 = 1.0 - c2;
    let pow = |x: f64, e: u64| if e == 0 { 1.0 } else { x.powi(e as i32) };
    let poisson = if s == 0.0 {
        if n == 0 { 1.0 } else { 0.0 }
    } else {
        (-2.0 * s * s + n as f64 * (2.0 * s * s).ln() - ln_factorial(n)).exp()
    };
    let binom = (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp();
    poisson * binom * pow(c2, k) * pow(s2, n - k)
}

/// Hermite functions `φ_n(x)` for `n = 0..=n_max`.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(PI.powf(-0.25) * (-x * x / 2.0).exp());
    if n_max >= 1 {
        out.push(2f64.sqrt() * x * out[0]);
    }
    for n in 1..n_max {
        let next = (2.0 / (n + 1) as f64).sqrt() * x * out[n] - (n as f64 / (n + 1) as f64).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Position wavefunction `⟨x|ψ⟩` of Fock amplitudes.
pub fn position_amplitude(psi: &[C64], x: f64) -> C64 {
    hermite_functions(psi.len().saturating_sub(1), x).iter().zip(psi).map(|(h, c)| c * *h).sum()
}

/// Large-amplitude approximation with `s_A` at phase `a`:
/// `e^{−(2j−s_A²)²/(2s_A²)} / (√π s_A²) · |⟨x = m/√j | ψ(b−a)⟩|²`,
/// where `ψ(b−a)` is `psi_b` rotated by `e^{−i a n̂}`.
pub fn bhd_large_cs_approx(s_a: f64, a: f64, psi_b: &[C64], twice_j: u32, twice_m: i32) -> f64 {
    if !valid_outcome(twice_j, twice_m) || twice_j == 0 {
        return 0.0;
    }
    let j = twice_j as f64 / 2.0;
    let m = twice_m as f64 / 2.0;
    let rotated: Vec<C64> = psi_b.iter().enumerate().map(|(n, c)| c * C64::cis(-a * n as f64)).collect();
    let gauss = (-(2.0 * j - s_a * s_a).powi(2) / (2.0 * s_a * s_a)).exp() / (PI.sqrt() * s_a * s_a);
    gauss * position_amplitude(&rotated, m / j.sqrt()).norm_sqr()
}

/// Closed-form quadrature statistics of a phase eigenstate:
/// `⟨x⟩ = √2 (2/3) √D cos b`, `(Δx)² ≈ ½ (3/2 + (2/9) D cos² b)`.
pub fn bhd_pe_quadrature_stats(s_b: usize, b: f64) -> (f64, f64) {
    let d = (s_b + 1) as f64;
    let mean = 2f64.sqrt() * (2.0 / 3.0) * d.sqrt() * b.cos();
    let var = 0.5 * (1.5 + (2.0 / 9.0) * d * b.cos().powi(2));
    (mean, var)
}

/// Exact `(⟨x̂⟩, ⟨x̂²⟩ − ⟨x̂⟩²)` of Fock amplitudes.
pub fn quadrature_moments(psi: &[C64]) -> (f64, f64) {
    // ⟨a⟩ = Σ ψ̄_{k−1} ψ_k √k, ⟨a²⟩ = Σ ψ̄_{k−2} ψ_k √(k(k−1)).
    let mut a1 = ZERO;
    let mut a2 = ZERO;
    let mut n = 0.0;
    for (k, c) in psi.iter().enumerate() {
        let kf = k as f64;
        n += kf * c.norm_sqr();
        if k >= 1 {
            a1 += psi[k - 1].conj() * c * kf.sqrt();
        }
        if k >= 2 {
            a2 += psi[k - 2].conj() * c * (kf * (kf - 1.0)).sqrt();
        }
    }
    let mean = 2f64.sqrt() * a1.re;
    let second = (2.0 * a2.re + 2.0 * n + 1.0) / 2.0;
    (mean, second - mean * mean)
}

/// Two phase eigenstates: probability of `2j` total photons, by counting
/// pairs `(n_A, n_B)` with `n_A + n_B = 2j`.
pub fn bhd_two_pe_total(s_a: u64, s_b: u64, twice_j: u64) -> Ratio<u64> {
    let denom = (s_a + 1) * (s_b + 1);
    let count = (0..=s_a).filter(|&na| twice_j >= na && twice_j - na <= s_b).count() as u64;
    Ratio::new(count, denom)
}

/// `min(2j, s_A, s_B, s_A + s_B − 2j) + 1` pairs, for cross-checking.
pub fn two_pe_pair_count(s_a: u64, s_b: u64, twice_j: u64) -> u64 {
    if twice_j > s_a + s_b {
        return 0;
    }
    twice_j.min(s_a).min(s_b).min(s_a + s_b - twice_j) + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_pe_counting_small() {
        let p: Vec<Ratio<u64>> = (0..=2).map(|n| bhd_two_pe_total(1, 1, n)).collect();
        assert_eq!(p, vec![Ratio::new(1, 4), Ratio::new(1, 2), Ratio::new(1, 4)]);
        assert_eq!(bhd_two_pe_total(1, 1, 3), Ratio::new(0, 1));
    }

    #[test]
    fn beamsplitter_on_single_photon() {
        // |1,0⟩ → (|1,0⟩ + |0,1⟩)/√2.
        let out = beamsplitter_output(&[ZERO, C64::from(1.0)], &[C64::from(1.0)]);
        assert!((out[1][0].norm_sqr() - 0.5).abs() < 1e-15);
        assert!((out[1][1].norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hong_ou_mandel() {
        // |1,1⟩ → (|2,0⟩ − |0,2⟩)/√2; no coincidences.
        let one = [ZERO, C64::from(1.0)];
        let out = beamsplitter_output(&one, &one);
        assert!(out[2][1].norm() < 1e-15);
        assert!((out[2][0].norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let n = 6;
        let (xs, h) = (-2000..=2000).map(|i| i as f64 * 0.005).fold((Vec::new(), 0.005), |(mut v, h), x| {
            v.push(hermite_functions(n, x));
            (v, h)
        });
        for p in 0..=n {
            for q in 0..=n {
                let s: f64 = xs.iter().map(|v| v[p] * v[q]).sum::<f64>() * h;
                let e = if p == q { 1.0 } else { 0.0 };
                assert!((s - e).abs() < 1e-10, "{p} {q} {s}");
            }
        }
    }
}
