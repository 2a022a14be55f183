#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Tanh-sinh quadrature of `f` on `[a, b]`. `f` receives `(x, dist_a, dist_b)`
/// so integrands with endpoint singularities can use the distances to the
/// endpoints directly instead of recomputing them by subtraction.
pub fn tanh_sinh<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let h = 1.0 / 128.0;
    let mut sum = 0.0;
    let mut k: i64 = -(6.5 / h) as i64;
    while (k as f64) * h <= 6.5 {
        let t = k as f64 * h;
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        // 1 - |x| without cancellation
        let comp = 1.0 / (u.abs().exp() * u.cosh());
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / (u.cosh() * u.cosh());
        k += 1;
        if comp == 0.0 || w == 0.0 {
            continue;
        }
        let (x, da, db) = if u < 0.0 {
            let da = half * comp;
            (a + da, da, (b - a) - da)
        } else {
            let db = half * comp;
            (b - db, (b - a) - db, db)
        };
        if da <= 0.0 || db <= 0.0 {
            continue;
        }
        sum += w * f(x, da, db);
    }
    sum * h * half
}

/// Wachter density written out independently of the library, given the
/// distances to both support endpoints and `1 - λ`.
pub fn wachter_density(g1: f64, lambda: f64, one_minus: f64, d_lo: f64, d_hi: f64) -> f64 {
    (d_lo * d_hi).sqrt() / (2.0 * std::f64::consts::PI * g1 * lambda * one_minus)
}

pub fn wachter_support(g1: f64, g2: f64) -> (f64, f64) {
    let a = (g1 * (1.0 - g2)).sqrt();
    let b = (g2 * (1.0 - g1)).sqrt();
    ((a - b).powi(2), (a + b).powi(2))
}

/// `∫ g dW(γ1, γ2)` over the continuous part only.
pub fn wachter_continuous<G: Fn(f64) -> f64>(g1: f64, g2: f64, g: G) -> f64 {
    let (lo, hi) = wachter_support(g1, g2);
    tanh_sinh(
        |x, da, db| {
            let lambda = lo + da;
            g(x) * wachter_density(g1, lambda, (1.0 - hi) + db, da, db)
        },
        lo,
        hi,
    )
}

/// `h(c) = Σ_{n≥2} ((-1)ⁿ - 1 + 2ⁿ) cⁿ / (n (n-1))`, summed until the terms
/// vanish. Converges for `c < 1/2`.
pub fn neglog_series(c: f64) -> f64 {
    let mut sum = 0.0;
    let mut cn = c;
    for n in 2..20_000 {
        cn *= c;
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let coef = sign - 1.0 + 2f64.powi(n);
        let term = coef * cn / (nf * (nf - 1.0));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_matrix(r: usize, c: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| StandardNormal.sample(rng))
}

/// Cumulative sums along columns: a `p × (T+1)` random-walk panel from `X_0 = 0`.
pub fn random_walk(p: usize, t: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let e = normal_matrix(p, t, rng);
    let mut x = DMatrix::zeros(p, t + 1);
    for j in 1..=t {
        for i in 0..p {
            x[(i, j)] = x[(i, j - 1)] + e[(i, j - 1)];
        }
    }
    x
}

/// `(1/T) Σ_t a_t b_tᵀ` with explicit loops.
pub fn naive_cross(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let t = a.ncols();
    let mut out = DMatrix::zeros(a.nrows(), b.nrows());
    for i in 0..a.nrows() {
        for j in 0..b.nrows() {
            let mut s = 0.0;
            for k in 0..t {
                s += a[(i, k)] * b[(j, k)];
            }
            out[(i, j)] = s / t as f64;
        }
    }
    out
}

/// Eigenvalues of the nonsymmetric `S01 S11⁻¹ S10 S00⁻¹`, ascending.
pub fn nonsymmetric_spectrum(
    s00: &DMatrix<f64>,
    s01: &DMatrix<f64>,
    s11: &DMatrix<f64>,
) -> Vec<f64> {
    let s11_inv = s11.clone().try_inverse().expect("S11 invertible");
    let s00_inv = s00.clone().try_inverse().expect("S00 invertible");
    let m = s01 * s11_inv * s01.transpose() * s00_inv;
    let mut ev: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re).collect();
    ev.sort_by(f64::total_cmp);
    ev
}
