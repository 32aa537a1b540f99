//! Meixner polynomials `M_0 = 1, M_1 = x, M_{n+1} = x M_n - n^2 M_{n-1}` and
//! the sequence `a(n) = M_n(1)` (OEIS A214615).
//!
//! The bivariate EGF `sum M_n(x) t^n / n!` equals
//! `exp(x arctan t) / sqrt(1 + t^2)` and is annihilated by
//! `(1 + t^2) D - (x - t)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::exactnum::{rat_int, Poly};
use crate::holonomic::{DiffOperator, IndexConvention, RecurrenceOperator, SequenceTable};
use crate::pseries::Series;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeixnerEvalRequest {
    pub n: usize,
    pub x: BigRational,
}

/// `M_n(x)` by forward iteration of the three-term recurrence.
pub fn meixner_eval(req: &MeixnerEvalRequest) -> BigRational {
    meixner(req.n, &req.x)
}

pub fn meixner(n: usize, x: &BigRational) -> BigRational {
    let mut prev = BigRational::one();
    if n == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for k in 1..n {
        let k2 = rat_int((k * k) as i64);
        let next = x * &cur - k2 * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `a(0..=last)` from `a(n+1) = a(n) - n^2 a(n-1)`, `a(0) = a(1) = 1`.
pub fn a214615_terms(last: usize) -> SequenceTable {
    let mut terms = Vec::with_capacity(last + 1);
    terms.push(BigInt::one());
    if last >= 1 {
        terms.push(BigInt::one());
    }
    for n in 1..last {
        let next = &terms[n] - BigInt::from(n * n) * &terms[n - 1];
        terms.push(next);
    }
    SequenceTable::new(0, terms)
}

/// `exp(x0 * arctan t) / sqrt(1 + t^2) mod t^(order+1)`, composed from the
/// series primitives rather than by solving the ODE.
pub fn build_egf(x0: &BigRational, order: usize) -> Series {
    let one_plus_t2 = Series::from_poly(&Poly::from_ints(&[1, 0, 1]), order);
    let arctan = Series::one(order)
        .div(&one_plus_t2)
        .expect("1 + t^2 is invertible")
        .integrate()
        .truncate(order)
        .expect("integration raised the order");
    let growth = arctan.scale(x0).exp().expect("arctan t has no constant term");
    let damping = one_plus_t2
        .inv_sqrt_onepl()
        .expect("1 + t^2 has constant term 1");
    growth.mul(&damping).expect("equal orders")
}

/// `(1 + t^2) D - (x0 - t)`.
pub fn bivariate_operator(x0: &BigRational) -> DiffOperator {
    let rhs = Poly::new(vec![x0.clone(), -BigRational::one()]);
    DiffOperator::first_order(Poly::from_ints(&[1, 0, 1]), rhs)
        .expect("leading coefficient is nonzero")
}

/// `(1 + t^2) D - (1 - t)`, the annihilator of the A214615 EGF.
pub fn a214615_operator() -> DiffOperator {
    bivariate_operator(&BigRational::one())
}

/// `a(n) - a(n-1) + (n-1)^2 a(n-2) = 0` for `n >= 2`.
pub fn a214615_recurrence() -> RecurrenceOperator {
    RecurrenceOperator::new(
        vec![Poly::one(), Poly::from_ints(&[-1]), Poly::from_ints(&[1, -2, 1])],
        2,
        IndexConvention::Strict,
    )
    .expect("nonzero")
}

/// Initial values `a(0) = M_0(1) = 1`, `a(1) = M_1(1) = 1`.
pub fn a214615_initial() -> SequenceTable {
    SequenceTable::from_i64s(0, &[1, 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat_make;
    use crate::holonomic::{ode_to_recurrence, rec_unroll};

    fn r(n: i64, d: i64) -> BigRational {
        rat_make(n.into(), d.into()).unwrap()
    }

    const PAPER_TERMS: [i64; 12] = [
        1, 1, 0, -4, -4, 60, 160, -2000, -9840, 118160, 915200, -10900800,
    ];

    #[test]
    fn eval_examples() {
        // M_2(x) = x^2 - 1
        for x in [-3, 0, 1, 2, 7] {
            assert_eq!(meixner(2, &rat_int(x)), rat_int(x * x - 1));
        }
        assert_eq!(meixner(2, &rat_int(1)), rat_int(0));
        assert_eq!(
            meixner_eval(&MeixnerEvalRequest { n: 3, x: rat_int(1) }),
            rat_int(-4)
        );
        assert_eq!(meixner(0, &rat_int(99)), rat_int(1));
        assert_eq!(meixner(1, &r(1, 2)), r(1, 2));
    }

    #[test]
    fn a214615_examples() {
        assert_eq!(a214615_terms(11), SequenceTable::from_i64s(0, &PAPER_TERMS));
        assert_eq!(a214615_terms(1), SequenceTable::from_i64s(0, &[1, 1]));
        assert_eq!(a214615_terms(0), SequenceTable::from_i64s(0, &[1]));
        let t = a214615_terms(60);
        for n in 0..=60 {
            assert_eq!(
                BigRational::from_integer(t.terms()[n].clone()),
                meixner(n, &rat_int(1))
            );
        }
    }

    #[test]
    fn egf_examples() {
        let f = build_egf(&rat_int(1), 6);
        let a = f.egf_coefficients().unwrap();
        assert_eq!(a, SequenceTable::from_i64s(0, &PAPER_TERMS[..7]));

        let g = build_egf(&rat_int(0), 4);
        assert_eq!(g, Series::new(vec![r(1, 1), r(0, 1), r(-1, 2), r(0, 1), r(3, 8)]));

        let h = build_egf(&rat_int(1), 3);
        assert_eq!(h.coeff(0), &rat_int(1));
        assert_eq!(build_egf(&rat_int(5), 0), Series::one(0));
    }

    #[test]
    fn parity() {
        for x in [r(1, 1), r(2, 1), r(1, 2), r(-3, 7)] {
            for n in 0..=30 {
                let sign = if n % 2 == 0 { rat_int(1) } else { rat_int(-1) };
                assert_eq!(meixner(n, &-x.clone()), sign * meixner(n, &x));
            }
        }
    }

    #[test]
    fn bivariate_recurrence_for_x3() {
        // a(n) - 3 a(n-1) + (n-1)^2 a(n-2) = 0, cross-checked against the EGF
        let x0 = rat_int(3);
        let rec = ode_to_recurrence(&bivariate_operator(&x0));
        assert_eq!(rec.to_string(), "a(n) - 3*a(n-1) + (n-1)^2*a(n-2) = 0 for n >= 2");
        let egf = build_egf(&x0, 25).egf_coefficients().unwrap();
        let unrolled = rec_unroll(&rec, &egf.truncated(1), 25).unwrap();
        assert_eq!(unrolled, egf);
    }

    #[test]
    fn named_objects_agree() {
        assert_eq!(ode_to_recurrence(&a214615_operator()), a214615_recurrence());
        assert_eq!(
            rec_unroll(&a214615_recurrence(), &a214615_initial(), 100).unwrap(),
            a214615_terms(100)
        );
    }
}
