//! Guessing P-recursive recurrences from terms.
//!
//! The ansatz `sum_{k<=r} sum_{j<=d} c_{k,j} n^j a(n-k) = 0` gives one linear
//! equation per index `n` whose terms `a(n-k)` all lie in the table. The
//! nullspace of that system, computed exactly, yields the candidates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{common_denominator, Poly};
use crate::holonomic::{rec_verify, IndexConvention, RecurrenceOperator, SequenceTable};

/// Extra equations required beyond the number of unknowns.
pub const OVERDETERMINATION_MARGIN: usize = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    /// # Panics
    /// If the dimensions are zero or `data.len() != rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        assert_eq!(data.len(), rows * cols, "data does not match dimensions");
        RationalMatrix { rows, cols, data }
    }

    pub fn from_ints(rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::new(
            rows,
            cols,
            data.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * &v[j])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Rows scaled to integers by their own denominators.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let den = BigRational::from_integer(common_denominator(row));
                row.iter().map(|c| (c * &den).to_integer()).collect()
            })
            .collect()
    }
}

/// Bareiss elimination to row echelon form; returns the pivot columns.
/// Every division is exact.
fn bareiss_echelon(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, below) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in below.iter_mut() {
            let factor = row[c].clone();
            for k in c + 1..cols {
                let v = &pivot_row[c] * &row[k] - &factor * &pivot_row[k];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[k] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Scales an integer vector so its entries have gcd 1 and its first nonzero
/// entry is positive.
fn normalize_content(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return;
    }
    let neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if neg { -g } else { g };
    for x in v.iter_mut() {
        *x /= &g;
    }
}

/// Basis of the right nullspace, one vector per free column in increasing
/// column order.
pub fn nullspace_exact(m: &RationalMatrix) -> Vec<Vec<BigRational>> {
    let cols = m.cols;
    let mut a = m.integer_rows();
    let pivots = bareiss_echelon(&mut a, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); cols];
            x[f] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate().rev() {
                let s = (pc + 1..cols)
                    .filter(|&k| !x[k].is_zero() && !a[row][k].is_zero())
                    .map(|k| BigRational::from_integer(a[row][k].clone()) * &x[k])
                    .fold(BigRational::zero(), |acc, v| acc + v);
                x[pc] = -s / BigRational::from_integer(a[row][pc].clone());
            }
            let den = BigRational::from_integer(common_denominator(&x));
            let mut ints: Vec<BigInt> = x.iter().map(|v| (v * &den).to_integer()).collect();
            normalize_content(&mut ints);
            ints.into_iter().map(BigRational::from_integer).collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessSpec {
    pub max_order: usize,
    pub max_degree: usize,
    pub terms: SequenceTable,
}

impl GuessSpec {
    pub fn unknowns(&self) -> usize {
        (self.max_order + 1) * (self.max_degree + 1)
    }

    /// Terms needed for `unknowns + OVERDETERMINATION_MARGIN` equations.
    pub fn terms_needed(&self) -> usize {
        self.unknowns() + self.max_order + OVERDETERMINATION_MARGIN
    }
}

/// Candidate recurrences of order `<= max_order` and degree `<= max_degree`
/// that hold on every supplied term, simplest first.
pub fn guess_recurrence(spec: &GuessSpec) -> Result<Vec<RecurrenceOperator>> {
    let needed = spec.terms_needed();
    let have = spec.terms.len();
    if have < needed {
        return Err(Error::InsufficientTerms { needed, have });
    }
    let r = spec.max_order;
    let d = spec.max_degree;
    let offset = spec.terms.offset();
    let first = offset + r as i64;
    let last = spec.terms.last_index();
    let mut data = Vec::with_capacity((last - first + 1) as usize * spec.unknowns());
    for n in first..=last {
        let n_big = BigInt::from(n);
        for k in 0..=r {
            let a = spec.terms.get(n - k as i64).expect("index in table");
            let mut w = a.clone();
            for _ in 0..=d {
                data.push(BigRational::from_integer(w.clone()));
                w *= &n_big;
            }
        }
    }
    let rows = (last - first + 1) as usize;
    let m = RationalMatrix::new(rows, spec.unknowns(), data);

    let mut out: Vec<RecurrenceOperator> = Vec::new();
    for v in nullspace_exact(&m) {
        let coeffs: Vec<Poly> = v
            .chunks(d + 1)
            .map(|c| Poly::new(c.to_vec()))
            .collect();
        if coeffs[0].is_zero() {
            continue;
        }
        let Ok(rec) = RecurrenceOperator::new(coeffs.clone(), first, IndexConvention::Strict) else {
            continue;
        };
        let rec = RecurrenceOperator::new(coeffs, offset + rec.order() as i64, IndexConvention::Strict)?;
        if rec_verify(&rec, &spec.terms).pass && !out.contains(&rec) {
            out.push(rec);
        }
    }
    out.sort_by_key(|rec| (rec.order(), rec.degree(), rec.max_coeff_bits()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_make;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        rat_make(n.into(), d.into()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn nullspace_examples() {
        assert!(nullspace_exact(&RationalMatrix::from_ints(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1])).is_empty());
        assert_eq!(
            nullspace_exact(&RationalMatrix::from_ints(1, 2, &[1, 1])),
            vec![ints(&[1, -1])]
        );
        let z = nullspace_exact(&RationalMatrix::from_ints(2, 2, &[0, 0, 0, 0]));
        assert_eq!(z, vec![ints(&[1, 0]), ints(&[0, 1])]);
    }

    #[test]
    fn nullspace_rational_entries() {
        let m = RationalMatrix::new(1, 3, vec![r(1, 2), r(-1, 3), r(0, 1)]);
        let ns = nullspace_exact(&m);
        assert_eq!(ns, vec![ints(&[2, 3, 0]), ints(&[0, 0, 1])]);
    }

    /// Rank by plain rational Gauss-Jordan, independent of the Bareiss route.
    fn rank_oracle(m: &RationalMatrix) -> usize {
        let mut a: Vec<Vec<BigRational>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let inv = a[rank][c].recip();
            let pivot: Vec<BigRational> = a[rank].iter().map(|v| v * &inv).collect();
            for (i, row) in a.iter_mut().enumerate() {
                if i != rank {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
            a[rank] = pivot;
            rank += 1;
        }
        rank
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 128, rng_algorithm: prop::test_runner::RngAlgorithm::ChaCha, rng_seed: prop::test_runner::RngSeed::Fixed(0x214615), ..ProptestConfig::default() })]

        #[test]
        fn nullspace_is_sound_and_complete(
            rows in 1usize..6,
            cols in 1usize..7,
            seed in prop::collection::vec((-4i64..5, 1i64..4), 42),
        ) {
            // low-rank structure is common with small entries and zeros
            let data: Vec<BigRational> = seed.iter().take(rows * cols).map(|&(n, d)| r(n, d)).collect();
            let m = RationalMatrix::new(rows, cols, data);
            let ns = nullspace_exact(&m);
            prop_assert_eq!(ns.len(), cols - rank_oracle(&m));
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
                prop_assert!(v.iter().all(|x| x.is_integer()));
                prop_assert!(v.iter().find(|x| !x.is_zero()).unwrap().is_positive());
            }
        }
    }

    #[test]
    fn insufficient_terms() {
        let spec = GuessSpec {
            max_order: 2,
            max_degree: 2,
            terms: SequenceTable::from_i64s(0, &[1; 11]),
        };
        assert_eq!(
            guess_recurrence(&spec),
            Err(Error::InsufficientTerms { needed: 12, have: 11 })
        );
    }

    #[test]
    fn ones_and_factorials() {
        let spec = GuessSpec {
            max_order: 1,
            max_degree: 0,
            terms: SequenceTable::from_i64s(0, &[1; 12]),
        };
        let c = guess_recurrence(&spec).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].to_string(), "a(n) - a(n-1) = 0 for n >= 1");

        let mut f = 1i64;
        let facts: Vec<i64> = (0..10)
            .map(|n| {
                if n > 0 {
                    f *= n;
                }
                f
            })
            .collect();
        let spec = GuessSpec {
            max_order: 1,
            max_degree: 1,
            terms: SequenceTable::from_i64s(0, &facts),
        };
        let c = guess_recurrence(&spec).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].to_string(), "a(n) - n*a(n-1) = 0 for n >= 1");
    }

    #[test]
    fn nothing_found_is_empty() {
        // 2^(n^2) is not P-recursive of small order/degree
        let terms: Vec<i64> = (0..8).map(|n| 1i64 << (n * n / 2)).collect();
        let spec = GuessSpec {
            max_order: 1,
            max_degree: 1,
            terms: SequenceTable::from_i64s(0, &terms),
        };
        assert!(guess_recurrence(&spec).unwrap().is_empty());
    }

    #[test]
    fn offset_tables() {
        // powers of two starting at index 3
        let spec = GuessSpec {
            max_order: 1,
            max_degree: 0,
            terms: SequenceTable::from_i64s(3, &[8, 16, 32, 64, 128]),
        };
        let c = guess_recurrence(&spec).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].to_string(), "a(n) - 2*a(n-1) = 0 for n >= 4");
    }
}
