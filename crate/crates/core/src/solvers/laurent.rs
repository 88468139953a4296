//! Laurent polynomials in `z`.

use num_complex::Complex64 as C;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Laurent(pub BTreeMap<i32, C>);

impl Laurent {
    pub fn add_term(&mut self, power: i32, c: C) {
        *self.0.entry(power).or_insert(C::new(0.0, 0.0)) += c;
    }

    pub fn eval(&self, z: C) -> C {
        self.0.iter().map(|(&p, &c)| c * z.powi(p)).sum()
    }

    pub fn trimmed(mut self, tol: f64) -> Self {
        self.0.retain(|_, c| c.norm() > tol);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_power(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }
}
