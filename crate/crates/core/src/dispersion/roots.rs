//! Polynomial roots by simultaneous (Aberth-Ehrlich) iteration.

use num_complex::Complex64 as C;

/// Evaluates `sum c_i x^i` and its derivative (coefficients in ascending order).
pub fn horner(coeffs: &[C], x: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut d = C::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        d = d * x + p;
        p = p * x + c;
    }
    (p, d)
}

/// Divides by `(x - r)`, returning quotient (ascending) and remainder.
pub fn deflate(coeffs: &[C], r: C) -> (Vec<C>, C) {
    let n = coeffs.len();
    let mut q = vec![C::new(0.0, 0.0); n - 1];
    let mut acc = C::new(0.0, 0.0);
    for i in (0..n).rev() {
        let next = coeffs[i] + acc * r;
        if i == 0 {
            return (q, next);
        }
        q[i - 1] = next;
        acc = next;
    }
    unreachable!()
}

/// All roots of a polynomial with ascending coefficients and nonzero leading term.
pub fn roots(coeffs: &[C]) -> Option<Vec<C>> {
    let deg = coeffs.len().checked_sub(1)?;
    if deg == 0 {
        return Some(vec![]);
    }
    let lead = coeffs[deg];
    if lead == C::new(0.0, 0.0) {
        return None;
    }
    if deg == 1 {
        return Some(vec![-coeffs[0] / lead]);
    }
    let monic: Vec<C> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let start = (monic[0].norm()).powf(1.0 / deg as f64).clamp(1e-3, radius);
    let mut z: Vec<C> = (0..deg)
        .map(|i| C::from_polar(start, 0.4 + 2.0 * std::f64::consts::PI * i as f64 / deg as f64))
        .collect();
    let mut converged = false;
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..deg {
            let (p, d) = horner(&monic, z[i]);
            if p == C::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / d;
            let s: C = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * s);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, d) = horner(&monic, *zi);
            if d == C::new(0.0, 0.0) {
                break;
            }
            let step = p / d;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            *zi -= step;
        }
    }
    let ok = z.iter().all(|r| {
        let (p, _) = horner(&monic, *r);
        let scale: f64 = monic.iter().enumerate().map(|(i, c)| c.norm() * r.norm().powi(i as i32)).sum();
        p.norm() <= 1e-9 * scale
    });
    if converged || ok {
        Some(z)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        let want = [C::new(1.0, 0.0), C::new(-2.0, 0.5), C::new(0.0, 3.0)];
        let mut p = vec![C::new(1.0, 0.0)];
        for r in want {
            let mut q = vec![C::new(0.0, 0.0); p.len() + 1];
            for (i, c) in p.iter().enumerate() {
                q[i + 1] += c;
                q[i] -= c * r;
            }
            p = q;
        }
        let got = roots(&p).unwrap();
        for w in want {
            assert!(got.iter().any(|g| (g - w).norm() < 1e-12));
        }
        let (q, rem) = deflate(&p, want[0]);
        assert!(rem.norm() < 1e-12);
        assert_eq!(q.len(), 3);
    }

    #[test]
    fn double_root_is_tolerated() {
        let p = [C::new(1.0, 0.0), C::new(-2.0, 0.0), C::new(1.0, 0.0)];
        let got = roots(&p).unwrap();
        assert!(got.iter().all(|g| (g - 1.0).norm() < 1e-6));
    }
}
