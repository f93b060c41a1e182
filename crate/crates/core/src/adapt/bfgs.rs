//! Dense BFGS with Armijo backtracking.

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BfgsOptions {
    /// Stop when the largest gradient component is at most this.
    pub gtol: f64,
    pub max_evals: usize,
}

impl Default for BfgsOptions {
    fn default() -> Self {
        Self { gtol: 1e-8, max_evals: 2000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BfgsStop {
    Converged,
    MaxEvals,
    /// The line search found no decrease.
    Stalled,
}

#[derive(Clone, Debug)]
pub struct BfgsResult<T> {
    /// Best point seen.
    pub x: Vec<T>,
    pub f: T,
    pub grad_norm: T,
    pub evals: usize,
    pub iterations: usize,
    pub stop: BfgsStop,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn inf_norm<T: Real>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

/// Minimizes `f` from `x0`; `fg` returns the value and gradient.
pub fn minimize<T: Real, F>(mut fg: F, x0: Vec<T>, opts: &BfgsOptions) -> BfgsResult<T>
where
    F: FnMut(&[T]) -> (T, Vec<T>),
{
    let k = x0.len();
    let gtol = T::lit(opts.gtol);
    let c1 = T::lit(1e-4);
    let half = T::lit(0.5);
    let mut x = x0;
    let (mut f, mut g) = fg(&x);
    let mut evals = 1;
    let mut iterations = 0;
    let identity = |k: usize| {
        let mut h = vec![T::zero(); k * k];
        (0..k).for_each(|i| h[i * k + i] = T::one());
        h
    };
    let mut h = identity(k);
    let stop = loop {
        if k == 0 || inf_norm(&g) <= gtol {
            break BfgsStop::Converged;
        }
        if evals >= opts.max_evals {
            break BfgsStop::MaxEvals;
        }
        let mut d: Vec<T> = (0..k).map(|i| -dot(&h[i * k..(i + 1) * k], &g)).collect();
        let mut slope = dot(&d, &g);
        if slope >= T::zero() {
            h = identity(k);
            d = g.iter().map(|&v| -v).collect();
            slope = dot(&d, &g);
        }
        let mut alpha = T::one();
        let mut accepted = None;
        while evals < opts.max_evals {
            let xn: Vec<T> = x.iter().zip(&d).map(|(&xi, &di)| xi + alpha * di).collect();
            let (fnew, gnew) = fg(&xn);
            evals += 1;
            if fnew <= f + c1 * alpha * slope && fnew.is_finite() {
                accepted = Some((xn, fnew, gnew));
                break;
            }
            alpha *= half;
            if alpha < T::lit(1e-20) {
                break;
            }
        }
        let Some((xn, fnew, gnew)) = accepted else {
            break if evals >= opts.max_evals { BfgsStop::MaxEvals } else { BfgsStop::Stalled };
        };
        iterations += 1;
        let s: Vec<T> = xn.iter().zip(&x).map(|(&a, &b)| a - b).collect();
        let y: Vec<T> = gnew.iter().zip(&g).map(|(&a, &b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > T::lit(1e-12) * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > T::zero() {
            if iterations == 1 {
                let scale = sy / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
            }
            let rho = T::one() / sy;
            let hy: Vec<T> = (0..k).map(|i| dot(&h[i * k..(i + 1) * k], &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..k {
                for j in 0..k {
                    let v = h[i * k + j] - rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                    h[i * k + j] = v;
                }
            }
        }
        let stuck = f - fnew <= T::epsilon() * f.abs().max(T::min_positive_value());
        x = xn;
        f = fnew;
        g = gnew;
        if stuck && inf_norm(&g) > gtol {
            break BfgsStop::Stalled;
        }
    };
    BfgsResult { grad_norm: inf_norm(&g), x, f, evals, iterations, stop }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        let r = minimize(
            |x: &[f64]| {
                let f = (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2);
                (f, vec![2.0 * (x[0] - 1.0), 20.0 * (x[1] + 2.0)])
            },
            vec![0.0, 0.0],
            &BfgsOptions::default(),
        );
        assert_eq!(r.stop, BfgsStop::Converged);
        assert!((r.x[0] - 1.0).abs() < 1e-8 && (r.x[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn rosenbrock() {
        let r = minimize(
            |x: &[f64]| {
                let (a, b) = (x[0], x[1]);
                let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
                let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
                (f, g)
            },
            vec![-1.2, 1.0],
            &BfgsOptions::default(),
        );
        assert!(r.f < 1e-14, "{r:?}");
    }

    #[test]
    fn never_worse_than_start() {
        let r = minimize(|x: &[f64]| (x[0].cos(), vec![-x[0].sin()]), vec![0.3], &BfgsOptions { gtol: 1e-8, max_evals: 3 });
        assert!(r.f <= 0.3f64.cos());
        let empty = minimize(|_: &[f64]| (0.5, vec![]), vec![], &BfgsOptions::default());
        assert_eq!((empty.stop, empty.evals), (BfgsStop::Converged, 1));
    }
}
