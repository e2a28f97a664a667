use crate::error::{check_open_unit, Error, Result};
use crate::params::ceil_size;
use crate::points::PointSet;

/// `ceil((r + r')^2 e^2 ln(d / (eps rho)))`, the number of Taylor terms per
/// coordinate that keeps the truncation tail below `eps rho / (20 d)` on the
/// admissible region.
pub fn truncation_order(r: f64, r_prime: f64, d: usize, eps: f64, rho: f64) -> Result<usize> {
    if !(r + r_prime > 1.0) {
        return Err(Error::InvalidParameter {
            name: "r + r'",
            value: r + r_prime,
            reason: "must exceed 1",
        });
    }
    check_open_unit("eps*rho", eps * rho)?;
    if d == 0 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let e2 = std::f64::consts::E * std::f64::consts::E;
    let raw = (r + r_prime).powi(2) * e2 * (d as f64 / (eps * rho)).ln();
    Ok(ceil_size(raw).max(1))
}

/// `sum_{p in Q} prod_i sum_{j < s} (-(x_i - p_i)^2)^j / j!`
///
/// Each factor is the degree-`s-1` Taylor polynomial of `exp(-a)` in
/// `a = (x_i - p_i)^2`, so the whole thing is a polynomial of degree
/// `2(s-1)` per coordinate that agrees with the unnormalized KDE of `Q` up to
/// the truncation tail.
#[derive(Debug, Clone)]
pub struct TruncatedTaylorPoly {
    centers: PointSet,
    order: usize,
    coeffs: Vec<f64>,
    ln_fact: Vec<f64>,
    /// Below these arguments the tails after `s` and `s - 1` terms are under
    /// `2^-60 exp(-a)`, so the factor equals `exp(-a)` in floating point.
    exact_below: [f64; 2],
}

pub fn build_truncated_poly(centers: &PointSet, order: usize) -> Result<TruncatedTaylorPoly> {
    TruncatedTaylorPoly::new(centers.clone(), order)
}

pub fn eval_truncated(poly: &TruncatedTaylorPoly, x: &[f64]) -> Result<f64> {
    poly.centers.check_dim(x)?;
    Ok(poly.eval(x))
}

impl TruncatedTaylorPoly {
    pub fn new(centers: PointSet, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter {
                name: "s",
                value: 0.0,
                reason: "truncation order must be at least 1",
            });
        }
        let mut coeffs = Vec::with_capacity(order);
        let mut c = 1.0;
        for j in 0..order {
            coeffs.push(c);
            c *= -1.0 / (j + 1) as f64;
        }
        let mut ln_fact = Vec::with_capacity(order + 1);
        let mut acc = 0.0;
        ln_fact.push(0.0);
        for k in 1..=order {
            acc += (k as f64).ln();
            ln_fact.push(acc);
        }
        let exact_below = [
            negligible_tail_bound(order, &ln_fact),
            negligible_tail_bound(order - 1, &ln_fact),
        ];
        Ok(Self {
            centers,
            order,
            coeffs,
            ln_fact,
            exact_below,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn centers(&self) -> &PointSet {
        &self.centers
    }

    pub fn dim(&self) -> usize {
        self.centers.dim()
    }

    /// Coefficients `(-1)^j / j!` of the per-coordinate factor as a
    /// polynomial in `(x_i - p_i)^2`. Shared by every center and coordinate.
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Evaluates the polynomial. `x` must have the centers' dimension.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.centers
            .iter()
            .map(|p| {
                p.iter()
                    .zip(x)
                    .map(|(pi, xi)| self.factor((xi - pi) * (xi - pi), self.order))
                    .product::<f64>()
            })
            .sum()
    }

    /// Value and gradient at `x`.
    pub fn eval_with_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let d = x.len();
        let mut grad = vec![0.0; d];
        let mut value = 0.0;
        let mut f = vec![0.0; d];
        let mut df = vec![0.0; d];
        for p in self.centers.iter() {
            for i in 0..d {
                let u = x[i] - p[i];
                let a = u * u;
                f[i] = self.factor(a, self.order);
                df[i] = -2.0 * u * self.factor(a, self.order - 1);
            }
            value += f.iter().product::<f64>();
            for i in 0..d {
                let mut g = df[i];
                for (k, fk) in f.iter().enumerate() {
                    if k != i {
                        g *= fk;
                    }
                }
                grad[i] += g;
            }
        }
        (value, grad)
    }

    /// `sum_{j < terms} (-a)^j / j!` for `a >= 0`.
    ///
    /// When `terms > a > 1` the series tail beyond the cut is alternating with
    /// shrinking terms, so the value is computed as `exp(-a)` minus that tail.
    /// Summing the head directly would cancel terms as large as `e^a`.
    pub(crate) fn factor(&self, a: f64, terms: usize) -> f64 {
        if terms == 0 {
            return 0.0;
        }
        if a == 0.0 {
            return 1.0;
        }
        let cut = if terms == self.order {
            self.exact_below[0]
        } else if terms + 1 == self.order {
            self.exact_below[1]
        } else {
            0.0
        };
        if a <= cut {
            (-a).exp()
        } else if a > 1.0 && (terms as f64) > a {
            (-a).exp() - self.tail(a, terms)
        } else if terms <= self.coeffs.len() && terms <= 160 {
            let mut acc = self.coeffs[terms - 1];
            for j in (0..terms - 1).rev() {
                acc = acc * a + self.coeffs[j];
            }
            acc
        } else {
            let mut term = 1.0;
            let mut sum = 0.0;
            for j in 0..terms {
                sum += term;
                term *= -a / (j + 1) as f64;
            }
            sum
        }
    }

    /// `sum_{j >= k} (-a)^j / j!`, assuming `k > a > 0`.
    fn tail(&self, a: f64, k: usize) -> f64 {
        let mut mag = (k as f64 * a.ln() - self.ln_fact(k)).exp();
        let mut sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let floor = 1e-18 * (-a).exp();
        let mut sum = 0.0;
        let mut j = k;
        while mag > 0.0 {
            sum += sign * mag;
            if mag <= floor || mag <= 1e-18 * sum.abs() {
                break;
            }
            j += 1;
            mag *= a / j as f64;
            sign = -sign;
        }
        sum
    }

    fn ln_fact(&self, k: usize) -> f64 {
        match self.ln_fact.get(k) {
            Some(v) => *v,
            None => (1..=k).map(|i| (i as f64).ln()).sum(),
        }
    }

    /// Upper bound on `a^k / k!`, the magnitude of the Taylor remainder of
    /// `exp(-a)` after `k` terms.
    pub(crate) fn remainder_bound(&self, a: f64, k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        if a <= 0.0 {
            return 0.0;
        }
        (k as f64 * a.ln() - self.ln_fact(k)).exp()
    }
}

/// Largest `a` with `a^k / k! <= 2^-60 exp(-a)`, by bisection on the
/// increasing function `k ln a - ln k! + a`.
fn negligible_tail_bound(k: usize, ln_fact: &[f64]) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let target = -60.0 * std::f64::consts::LN_2;
    let g = |a: f64| k as f64 * a.ln() - ln_fact[k] + a;
    let (mut lo, mut hi) = (0.0, k as f64);
    if g(hi) <= target {
        return hi;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
