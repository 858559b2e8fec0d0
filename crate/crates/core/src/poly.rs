use std::collections::BTreeMap;
use std::fmt;

/// Integer polynomial in one variable with no constant term.
///
/// Stored sparsely; zero coefficients are never kept.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    terms: BTreeMap<u32, i64>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly::default()
    }

    /// Adds `coeff * t^exp`. Exponent 0 terms are dropped since they only
    /// ever arise from η = 0, which contributes nothing.
    pub fn add_term(&mut self, exp: u32, coeff: i64) {
        if exp == 0 || coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, i64)>>(terms: I) -> Self {
        let mut p = SparsePoly::zero();
        for (exp, coeff) in terms {
            p.add_term(exp, coeff);
        }
        p
    }

    pub fn coeff(&self, exp: u32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Renders with a chosen variable name, e.g. `2t_A - 2t_A^2`.
    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (exp, coeff)) in self.terms().enumerate() {
            let magnitude = coeff.unsigned_abs();
            if i == 0 {
                if coeff < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if coeff < 0 { " - " } else { " + " });
            }
            if magnitude != 1 {
                out.push_str(&magnitude.to_string());
            }
            out.push_str(var);
            if exp != 1 {
                out.push('^');
                out.push_str(&exp.to_string());
            }
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}
