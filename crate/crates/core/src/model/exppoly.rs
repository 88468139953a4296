//! Finite sums of terms `c x^p e^{beta x}`.
//!
//! Every datum in the worked examples (sines, cosines, `t e^{-t}`, ...) has this
//! form, which gives closed-form lattice sums, half-line transforms and
//! time transforms.

use num_complex::Complex64 as C;

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: C,
    pub power: u32,
    pub rate: C,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExpPoly {
    pub terms: Vec<Term>,
}

const MERGE_TOL: f64 = 1e-14;

/// `e^z - 1` without cancellation for small `z`.
pub fn expm1(z: C) -> C {
    if z.norm() < 1e-5 {
        z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)))
    } else if z.norm() < 1.0 {
        let half = z * 0.5;
        let sh = C::new(half.re.sinh() * half.im.cos(), half.re.cosh() * half.im.sin());
        2.0 * half.exp() * sh
    } else {
        z.exp() - 1.0
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |a, b| a * b as f64)
}

fn binom(n: u32, k: u32) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Eulerian polynomial coefficients `A_p`, so that `sum_{n>=1} n^p r^n = r A_p(r) / (1-r)^{p+1}`.
fn eulerian(p: u32) -> Vec<f64> {
    let mut row = vec![1.0];
    for q in 1..=p {
        let mut next = vec![0.0; q as usize];
        for m in 0..q as usize {
            let a = if m < row.len() { (m + 1) as f64 * row[m] } else { 0.0 };
            let b = if m >= 1 && m - 1 < row.len() { (q as f64 - m as f64) * row[m - 1] } else { 0.0 };
            next[m] = a + b;
        }
        row = next;
    }
    row
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly { terms: vec![] }
    }

    pub fn constant(c: C) -> Self {
        ExpPoly::term(c, 0, C::new(0.0, 0.0))
    }

    pub fn term(coef: C, power: u32, rate: C) -> Self {
        ExpPoly { terms: vec![Term { coef, power, rate }] }.normalized()
    }

    pub fn var() -> Self {
        ExpPoly::term(C::new(1.0, 0.0), 1, C::new(0.0, 0.0))
    }

    /// Merges like terms and drops zero coefficients.
    pub fn normalized(mut self) -> Self {
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if let Some(o) = out
                .iter_mut()
                .find(|o| o.power == t.power && (o.rate - t.rate).norm() <= MERGE_TOL * (1.0 + t.rate.norm()))
            {
                o.coef += t.coef;
            } else {
                out.push(t);
            }
        }
        out.retain(|t| t.coef != C::new(0.0, 0.0));
        ExpPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the constant value when the sum has no `x` dependence.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::new(0.0, 0.0)),
            [t] if t.power == 0 && t.rate == C::new(0.0, 0.0) => Some(t.coef),
            _ => None,
        }
    }

    /// Returns `(a, b)` when the sum equals `a + b x`.
    pub fn as_linear(&self) -> Option<(C, C)> {
        let mut a = C::new(0.0, 0.0);
        let mut b = C::new(0.0, 0.0);
        for t in &self.terms {
            if t.rate != C::new(0.0, 0.0) {
                return None;
            }
            match t.power {
                0 => a += t.coef,
                1 => b += t.coef,
                _ => return None,
            }
        }
        Some((a, b))
    }

    pub fn add(&self, o: &ExpPoly) -> ExpPoly {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        ExpPoly { terms }.normalized()
    }

    pub fn scale(&self, s: C) -> ExpPoly {
        ExpPoly {
            terms: self.terms.iter().map(|t| Term { coef: t.coef * s, ..t.clone() }).collect(),
        }
        .normalized()
    }

    pub fn sub(&self, o: &ExpPoly) -> ExpPoly {
        self.add(&o.scale(C::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &ExpPoly) -> ExpPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            for b in &o.terms {
                terms.push(Term { coef: a.coef * b.coef, power: a.power + b.power, rate: a.rate + b.rate });
            }
        }
        ExpPoly { terms }.normalized()
    }

    /// `e^{a + b x}`.
    pub fn exp_linear(a: C, b: C) -> ExpPoly {
        ExpPoly::term(a.exp(), 0, b)
    }

    pub fn sin_linear(a: C, b: C) -> ExpPoly {
        let i = C::i();
        let p = ExpPoly::exp_linear(i * a, i * b);
        let m = ExpPoly::exp_linear(-i * a, -i * b);
        p.sub(&m).scale(1.0 / (2.0 * i))
    }

    pub fn cos_linear(a: C, b: C) -> ExpPoly {
        let i = C::i();
        let p = ExpPoly::exp_linear(i * a, i * b);
        let m = ExpPoly::exp_linear(-i * a, -i * b);
        p.add(&m).scale(C::new(0.5, 0.0))
    }

    pub fn derivative(&self) -> ExpPoly {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.power > 0 {
                terms.push(Term { coef: t.coef * t.power as f64, power: t.power - 1, rate: t.rate });
            }
            terms.push(Term { coef: t.coef * t.rate, power: t.power, rate: t.rate });
        }
        ExpPoly { terms }.normalized()
    }

    /// Substitutes `x -> x + s`.
    pub fn shifted(&self, s: f64) -> ExpPoly {
        let mut terms = Vec::new();
        for t in &self.terms {
            let c = t.coef * (t.rate * s).exp();
            for i in 0..=t.power {
                let f = binom(t.power, i) * s.powi((t.power - i) as i32);
                terms.push(Term { coef: c * f, power: i, rate: t.rate });
            }
        }
        ExpPoly { terms }.normalized()
    }

    pub fn eval(&self, x: f64) -> C {
        self.terms
            .iter()
            .map(|t| t.coef * x.powi(t.power as i32) * (t.rate * x).exp())
            .sum()
    }

    pub fn max_power(&self) -> u32 {
        self.terms.iter().map(|t| t.power).max().unwrap_or(0)
    }

    /// Largest real part among the exponential rates.
    pub fn max_rate_re(&self) -> f64 {
        self.terms.iter().map(|t| t.rate.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// A bound `|f(x)| <= A e^{-alpha x}` for `x >= 0`, when every rate has negative real part.
    pub fn decay_bound(&self) -> Option<(f64, f64)> {
        if self.is_zero() {
            return Some((0.0, 1.0));
        }
        let worst = self.max_rate_re();
        if worst >= 0.0 {
            return None;
        }
        let alpha = -worst / 2.0;
        let mut a = 0.0;
        for t in &self.terms {
            let gap = -t.rate.re - alpha;
            let p = t.power as f64;
            let peak = if t.power == 0 { 1.0 } else { (p / gap).powf(p) * (-p).exp() };
            a += t.coef.norm() * peak;
        }
        Some((a, alpha))
    }

    /// `h sum_{n >= start} w^n f(nh)`, with `log_w` the logarithm of `w`.
    ///
    /// Requires `|w e^{beta h}| < 1` for every term.
    pub fn lattice_sum(&self, log_w: C, h: f64, start: u32) -> C {
        let mut total = C::new(0.0, 0.0);
        for t in &self.terms {
            let lr = log_w + t.rate * h;
            let r = lr.exp();
            let one_minus_r = -expm1(lr);
            let a = eulerian(t.power);
            let mut poly = C::new(0.0, 0.0);
            for c in a.iter().rev() {
                poly = poly * r + *c;
            }
            let mut s = r * poly / one_minus_r.powi(t.power as i32 + 1);
            if start == 0 && t.power == 0 {
                s += 1.0;
            }
            total += t.coef * h.powi(t.power as i32 + 1) * s;
        }
        total
    }

    /// `int_0^inf f(x) e^{-i k x} dx`, valid when `Re(beta - i k) < 0` for every term.
    pub fn half_line_transform(&self, k: C) -> C {
        let i = C::i();
        self.terms
            .iter()
            .map(|t| t.coef * factorial(t.power) / (i * k - t.rate).powi(t.power as i32 + 1))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eulerian_rows() {
        assert_eq!(eulerian(0), vec![1.0]);
        assert_eq!(eulerian(2), vec![1.0, 1.0]);
        assert_eq!(eulerian(3), vec![1.0, 4.0, 1.0]);
        assert_eq!(eulerian(4), vec![1.0, 11.0, 11.0, 1.0]);
    }

    #[test]
    fn lattice_sum_matches_brute_force() {
        let f = ExpPoly::term(C::new(3.0, 0.0), 1, C::new(-1.0, 0.0))
            .add(&ExpPoly::cos_linear(C::new(0.0, 0.0), C::new(3.0, 0.0)).mul(&ExpPoly::exp_linear(C::new(0.0, 0.0), C::new(-0.5, 0.0))));
        let h = 0.05;
        for &(k, start) in &[(0.3, 1u32), (-2.0, 0), (40.0, 1)] {
            let lw = C::new(0.0, -k * h);
            let closed = f.lattice_sum(lw, h, start);
            let brute: C = (start..20000).map(|n| h * (lw * n as f64).exp() * f.eval(n as f64 * h)).sum();
            assert!((closed - brute).norm() < 1e-12, "{closed} {brute}");
        }
    }

    #[test]
    fn derivative_and_shift() {
        let f = ExpPoly::sin_linear(C::new(0.0, 0.0), C::new(4.0, 0.0)).mul(&ExpPoly::var());
        let d = f.derivative();
        let g = f.shifted(0.3);
        for &x in &[0.1, 0.7, 1.3] {
            let fd = (f.eval(x + 1e-5) - f.eval(x - 1e-5)) / 2e-5;
            assert!((fd - d.eval(x)).norm() < 1e-8);
            assert!((g.eval(x) - f.eval(x + 0.3)).norm() < 1e-12);
        }
    }

    #[test]
    fn half_line_transform_of_decaying_exponential() {
        let f = ExpPoly::term(C::new(1.0, 0.0), 2, C::new(-1.0, 0.0));
        let k = C::new(0.7, 0.0);
        let want = 2.0 / (C::new(1.0, 0.0) + C::i() * k).powi(3);
        assert!((f.half_line_transform(k) - want).norm() < 1e-14);
    }

    #[test]
    fn decay_bound_holds() {
        let f = ExpPoly::term(C::new(3.0, 0.0), 1, C::new(-1.0, 0.0));
        let (a, al) = f.decay_bound().unwrap();
        for i in 0..400 {
            let x = i as f64 * 0.1;
            assert!(f.eval(x).norm() <= a * (-al * x).exp() * (1.0 + 1e-12));
        }
    }
}
