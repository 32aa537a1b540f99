//! Linear differential operators, P-recursive recurrences and the bridge
//! between them.
//!
//! For an EGF `F(t) = sum a(n) t^n / n!` the coefficient of `t^n / n!` in
//! `t^a F^(b)(t)` is `n (n-1) ... (n-a+1) a(n-a+b)`. Differentiating `b` times
//! shifts coefficients down by `b` while `n!/(n-a+b)!` becomes
//! `(n-a+b)!/(n-a)!`; multiplying by `t^a` then moves index `n-a` to `n` and
//! leaves `n!/(n-a)!`, the falling factorial of length `a`. Summing this over
//! the monomials of an operator gives the recurrence the coefficients obey,
//! valid for every `n >= 0` once terms with negative index are read as zero.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Poly;
use crate::parse::{self, push_signed};
use crate::pseries::Series;

/// Consecutive integer terms `a(offset), a(offset + 1), ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SequenceTable {
    offset: i64,
    terms: Vec<BigInt>,
}

impl SequenceTable {
    pub fn new(offset: i64, terms: Vec<BigInt>) -> Self {
        SequenceTable { offset, terms }
    }

    pub fn from_i64s(offset: i64, terms: &[i64]) -> Self {
        Self::new(offset, terms.iter().map(|&t| BigInt::from(t)).collect())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<BigInt> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Index of the last term, or `offset - 1` when empty.
    pub fn last_index(&self) -> i64 {
        self.offset + self.terms.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<&BigInt> {
        let i = usize::try_from(n - self.offset).ok()?;
        self.terms.get(i)
    }

    pub fn get_mut(&mut self, n: i64) -> Option<&mut BigInt> {
        let i = usize::try_from(n - self.offset).ok()?;
        self.terms.get_mut(i)
    }

    /// `(n, a(n))` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms
            .iter()
            .enumerate()
            .map(move |(i, t)| (self.offset + i as i64, t))
    }

    /// Keeps the terms with index `<= n`.
    pub fn truncated(&self, n: i64) -> Self {
        let keep = (n - self.offset + 1).clamp(0, self.terms.len() as i64) as usize;
        SequenceTable::new(self.offset, self.terms[..keep].to_vec())
    }
}

/// `sum_j q_j(t) D^j` with `D = d/dt`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    coeffs: Vec<Poly>,
}

impl DiffOperator {
    /// Coefficients indexed by derivative order. Trailing zero coefficients
    /// are dropped; an all-zero operator is rejected.
    pub fn new(mut coeffs: Vec<Poly>) -> Result<Self> {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroOperator);
        }
        Ok(DiffOperator { coeffs })
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest coefficient degree.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    /// The first-order operator `lhs * D - rhs`, i.e. the ODE `lhs F' = rhs F`.
    pub fn first_order(lhs: Poly, rhs: Poly) -> Result<Self> {
        Self::new(vec![-rhs, lhs])
    }

    /// `sum_j q_j f^(j)`, kept to order `N - order(L)`.
    pub fn apply(&self, f: &Series) -> Result<Series> {
        let ord = self.order();
        if f.order() < ord {
            return Err(Error::InsufficientOrder {
                needed: ord,
                have: f.order(),
            });
        }
        let out_order = f.order() - ord;
        let mut acc = Series::zero(out_order);
        let mut deriv = f.clone();
        for (j, q) in self.coeffs.iter().enumerate() {
            if j > 0 {
                deriv = deriv.derivative()?;
            }
            if q.is_zero() {
                continue;
            }
            acc = acc.add(&deriv.truncate(out_order)?.mul_poly(q))?;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &DiffOperator) -> Result<DiffOperator> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |c: &[Poly], j: usize| c.get(j).cloned().unwrap_or_default();
        Self::new(
            (0..n)
                .map(|j| &get(&self.coeffs, j) + &get(&other.coeffs, j))
                .collect(),
        )
    }

    /// `(shift, weight)` contributions of every monomial `c t^a D^b`: the
    /// coefficient of `t^n/n!` in `L F` is `sum weight(n) a(n + shift)`.
    pub fn shift_weights(&self) -> Vec<(i64, Poly)> {
        let mut out = Vec::new();
        for (b, q) in self.coeffs.iter().enumerate() {
            for (a, c) in q.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (shift, weight) = egf_shift_weight(a, b);
                out.push((shift, weight.scale(c)));
            }
        }
        out
    }
}

impl FromStr for DiffOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DiffOperator::new(parse::parse_ode(s)?)
    }
}

impl fmt::Display for DiffOperator {
    /// Highest derivative first, e.g. `(1 + t^2)*D - (1 - t)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (j, q) in self.coeffs.iter().enumerate().rev() {
            if q.is_zero() {
                continue;
            }
            let dj = match j {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{j}"),
            };
            push_coefficient(&mut out, q, "t", &dj, false);
        }
        f.write_str(&out)
    }
}

/// Appends `± coeff*target`. With `target` empty the coefficient stands alone.
fn push_coefficient(out: &mut String, q: &Poly, var: &str, target: &str, factor_linear: bool) {
    let nonzero: Vec<_> = q
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let join = |out: &mut String, body: String| {
        match (body.is_empty(), target.is_empty()) {
            (true, true) => out.push('1'),
            (true, false) => out.push_str(target),
            (false, true) => out.push_str(&body),
            (false, false) => {
                out.push_str(&body);
                out.push('*');
                out.push_str(target);
            }
        };
    };
    if nonzero.len() == 1 {
        let (k, c) = nonzero[0];
        push_signed(out, c.is_negative());
        let mag = c.abs();
        let pow = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        let body = match (mag.is_one(), pow.is_empty()) {
            (true, _) => pow,
            (false, true) => mag.to_string(),
            (false, false) => format!("{mag}*{pow}"),
        };
        join(out, body);
        return;
    }
    if factor_linear {
        if let Some((c, s, e)) = q.as_linear_power() {
            push_signed(out, c.is_negative());
            let mag = c.abs();
            let base = match s.sign() {
                num_bigint::Sign::Plus => format!("({var}-{s})"),
                num_bigint::Sign::Minus => format!("({var}+{})", -s),
                num_bigint::Sign::NoSign => var.to_string(),
            };
            let mut body = if e == 1 { base } else { format!("{base}^{e}") };
            if !mag.is_one() {
                body = format!("{mag}*{body}");
            }
            join(out, body);
            return;
        }
    }
    let lowest_negative = nonzero[0].1.is_negative();
    push_signed(out, lowest_negative);
    let shown = if lowest_negative { -q.clone() } else { q.clone() };
    join(out, format!("({})", shown.to_string_in(var)));
}

/// `[t^n/n!] t^a F^(b) = n^(falling a) * a(n - a + b)`: returns `(b - a, n^(falling a))`.
pub fn egf_shift_weight(a: usize, b: usize) -> (i64, Poly) {
    (b as i64 - a as i64, Poly::falling_factorial(a))
}

/// How terms with index below the table offset are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IndexConvention {
    /// A relation is only asserted where every referenced index is present.
    Strict,
    /// Missing lower terms read as zero, as in `a(-1) = 0`.
    ZeroBelowOffset,
}

/// `sum_{k=0..r} p_k(n) a(n-k) = 0` for `n >= n_min`.
///
/// Stored normalized: integer coefficients with gcd 1, `p_0` nonzero with
/// positive leading coefficient, `p_r` nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecurrenceOperator {
    coeffs: Vec<Poly>,
    n_min: i64,
    convention: IndexConvention,
}

impl RecurrenceOperator {
    /// Normalizes `sum_k coeffs[k](n) a(n-k) = 0, n >= n_min`. Leading zero
    /// coefficients are removed by re-indexing.
    pub fn new(mut coeffs: Vec<Poly>, mut n_min: i64, convention: IndexConvention) -> Result<Self> {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|p| p.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Err(Error::ZeroOperator);
        }
        if lead_zeros > 0 {
            // substitute n -> n + m so that a(n + m - k) becomes a(n - k')
            let m = lead_zeros as i64;
            coeffs = coeffs[lead_zeros..].iter().map(|p| p.shift(m)).collect();
            n_min -= m;
        }
        let factor = Poly::integer_content_factor(&coeffs);
        let sign = if coeffs[0].leading().is_some_and(|c| c.is_negative()) {
            -factor
        } else {
            factor
        };
        let coeffs = coeffs.iter().map(|p| p.scale(&sign)).collect::<Vec<_>>();
        let mut rec = RecurrenceOperator {
            coeffs,
            n_min,
            convention,
        };
        if rec.n_min >= rec.order() as i64 {
            rec.convention = IndexConvention::Strict;
        }
        Ok(rec)
    }

    /// Builds from `sum_s c_s(n) a(n+s) = 0` keyed by shift `s`, valid for
    /// `n >= valid_from` in that indexing.
    pub fn from_shifts(
        by_shift: &BTreeMap<i64, Poly>,
        valid_from: Option<i64>,
    ) -> Result<Self> {
        let nonzero: Vec<_> = by_shift.iter().filter(|(_, p)| !p.is_zero()).collect();
        let (Some(&(&s_min, _)), Some(&(&s_max, _))) = (nonzero.first(), nonzero.last()) else {
            return Err(Error::ZeroOperator);
        };
        let order = (s_max - s_min) as usize;
        let mut coeffs = vec![Poly::zero(); order + 1];
        for (&s, p) in nonzero {
            coeffs[(s_max - s) as usize] = p.shift(-s_max);
        }
        let (n_min, convention) = match valid_from {
            Some(v) => (v + s_max, IndexConvention::ZeroBelowOffset),
            None => (order as i64, IndexConvention::Strict),
        };
        Self::new(coeffs, n_min, convention)
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    /// [`IndexConvention::ZeroBelowOffset`] only when `n_min < order`, i.e.
    /// when the relation is asserted at indices that reach below the table.
    pub fn convention(&self) -> IndexConvention {
        self.convention
    }

    /// Same relation asserted only where every index is in range.
    pub fn strict(&self) -> Self {
        RecurrenceOperator {
            coeffs: self.coeffs.clone(),
            n_min: self.n_min.max(self.order() as i64),
            convention: IndexConvention::Strict,
        }
    }

    /// Bit length of the largest integer coefficient.
    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .flat_map(|p| p.coeffs().iter())
            .map(|c| c.numer().bits())
            .max()
            .unwrap_or(0)
    }

    fn int_coeffs(&self) -> Vec<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|p| p.coeffs().iter().map(BigRational::to_integer).collect())
            .collect()
    }

    /// `(order, max degree)`.
    pub fn order_degree(&self) -> (usize, usize) {
        (self.order(), self.degree())
    }
}

fn eval_int(coeffs: &[BigInt], n: i64) -> BigInt {
    let x = BigInt::from(n);
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * &x + c)
}

impl FromStr for RecurrenceOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parsed = parse::parse_recurrence(s)?;
        RecurrenceOperator::from_shifts(&parsed.by_shift, parsed.n_min)
    }
}

impl fmt::Display for RecurrenceOperator {
    /// `a(n) - a(n-1) + (n-1)^2*a(n-2) = 0 for n >= 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (k, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let term = if k == 0 {
                "a(n)".to_string()
            } else {
                format!("a(n-{k})")
            };
            push_coefficient(&mut out, p, "n", &term, true);
        }
        write!(f, "{out} = 0 for n >= {}", self.n_min)
    }
}

/// Converts `L F = 0` into the recurrence satisfied by the EGF coefficients
/// of `F`, with the strict validity threshold.
pub fn ode_to_recurrence(op: &DiffOperator) -> RecurrenceOperator {
    ode_to_recurrence_with(op, IndexConvention::Strict)
}

/// As [`ode_to_recurrence`]; under [`IndexConvention::ZeroBelowOffset`] the
/// threshold is the first index at which the coefficient identity applies,
/// with negative-index terms read as zero.
pub fn ode_to_recurrence_with(op: &DiffOperator, convention: IndexConvention) -> RecurrenceOperator {
    let mut by_shift: BTreeMap<i64, Poly> = BTreeMap::new();
    for (shift, weight) in op.shift_weights() {
        let e = by_shift.entry(shift).or_default();
        *e = &*e + &weight;
    }
    // Monomials sharing a shift have distinct falling-factorial degrees, so
    // nothing cancels. The identity holds for every n >= 0 of the EGF.
    let rec = RecurrenceOperator::from_shifts(&by_shift, Some(0))
        .expect("a nonzero operator has a nonzero recurrence");
    match convention {
        IndexConvention::Strict => rec.strict(),
        IndexConvention::ZeroBelowOffset => rec,
    }
}

pub fn rec_order_degree(rec: &RecurrenceOperator) -> (usize, usize) {
    rec.order_degree()
}

/// Outcome of checking a recurrence against a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub pass: bool,
    /// First and last `n` at which the relation was evaluated; empty when
    /// `n_min_checked > n_max_checked`.
    pub n_min_checked: i64,
    pub n_max_checked: i64,
    pub first_failure: Option<(i64, BigInt)>,
    /// Every `n` with a nonzero residual.
    pub failures: Vec<i64>,
}

impl VerifyReport {
    pub fn checked_count(&self) -> usize {
        (self.n_max_checked - self.n_min_checked + 1).max(0) as usize
    }
}

/// Evaluates `sum_k p_k(n) a(n-k)` exactly at every applicable `n`.
pub fn rec_verify(rec: &RecurrenceOperator, seq: &SequenceTable) -> VerifyReport {
    let r = rec.order() as i64;
    let zero_ext = rec.convention == IndexConvention::ZeroBelowOffset;
    let start = if zero_ext {
        rec.n_min.max(seq.offset)
    } else {
        rec.n_min.max(seq.offset + r)
    };
    let end = seq.last_index();
    let coeffs = rec.int_coeffs();
    let zero = BigInt::zero();
    let mut failures = Vec::new();
    let mut first_failure = None;
    for n in start..=end {
        let mut residual = BigInt::zero();
        for (k, p) in coeffs.iter().enumerate() {
            let term = seq.get(n - k as i64).unwrap_or(&zero);
            if p.is_empty() || term.is_zero() {
                continue;
            }
            residual += eval_int(p, n) * term;
        }
        if !residual.is_zero() {
            if first_failure.is_none() {
                first_failure = Some((n, residual));
            }
            failures.push(n);
        }
    }
    VerifyReport {
        pass: first_failure.is_none(),
        n_min_checked: start,
        n_max_checked: end,
        first_failure,
        failures,
    }
}

/// Extends `initial` forward to index `last` by solving for the `k = 0` term.
pub fn rec_unroll(rec: &RecurrenceOperator, initial: &SequenceTable, last: i64) -> Result<SequenceTable> {
    let r = rec.order();
    let zero_ext = rec.convention == IndexConvention::ZeroBelowOffset;
    let needed_for_order = if zero_ext { 0 } else { r };
    let needed = needed_for_order.max((rec.n_min - initial.offset).max(0) as usize);
    if initial.len() < needed {
        return Err(Error::InsufficientInitial {
            needed,
            have: initial.len(),
        });
    }
    let coeffs = rec.int_coeffs();
    let mut out = initial.clone();
    let zero = BigInt::zero();
    let first = initial.last_index() + 1;
    out.terms.reserve((last - initial.last_index()).max(0) as usize);
    for n in first..=last {
        let lead = eval_int(&coeffs[0], n);
        if lead.is_zero() {
            return Err(Error::SingularUnroll { n });
        }
        let mut acc = BigInt::zero();
        for (k, p) in coeffs.iter().enumerate().skip(1) {
            let term = out.get(n - k as i64).unwrap_or(&zero);
            if p.is_empty() || term.is_zero() {
                continue;
            }
            acc += eval_int(p, n) * term;
        }
        let numer = -acc;
        let (q, rem) = numer.div_rem(&lead);
        if !rem.is_zero() {
            return Err(Error::NonIntegerTerm {
                n,
                value: BigRational::new(numer, lead).to_string(),
            });
        }
        out.terms.push(q);
    }
    Ok(out.truncated(last))
}
