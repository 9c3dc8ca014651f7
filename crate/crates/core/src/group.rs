//! Algebraic contracts the tree is generic over.
//!
//! A context value supplies the identity, the group operation and inverses.
//! Operations that can leave the representable range return `None`, which the
//! tree surfaces as [`Error::Overflow`](crate::Error::Overflow).

use std::fmt::Debug;

/// An abelian group given as a context value.
///
/// Implementations must satisfy associativity, commutativity, the identity
/// law and the inverse law for every pair of representable elements whose
/// combination is representable. [`check_group_laws`] tests these on samples.
pub trait AbelianGroup {
    type Elem: Copy + PartialEq + Debug;

    fn identity(&self) -> Self::Elem;

    /// Group operation, `None` when the result is not representable.
    fn combine(&self, a: Self::Elem, b: Self::Elem) -> Option<Self::Elem>;

    /// Inverse element, `None` when it is not representable.
    fn invert(&self, a: Self::Elem) -> Option<Self::Elem>;

    /// `combine(a, invert(b))`.
    fn difference(&self, a: Self::Elem, b: Self::Elem) -> Option<Self::Elem> {
        self.combine(a, self.invert(b)?)
    }
}

/// An abelian group with a translation-invariant total order.
///
/// Required by [`PartialSumTree::find`](crate::PartialSumTree::find).
pub trait OrderedGroup: AbelianGroup {
    fn less_than(&self, a: Self::Elem, b: Self::Elem) -> bool;
}

/// Signed 64-bit integers under addition. Overflow is reported, never wrapped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckedI64;

impl AbelianGroup for CheckedI64 {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }

    fn combine(&self, a: i64, b: i64) -> Option<i64> {
        a.checked_add(b)
    }

    fn invert(&self, a: i64) -> Option<i64> {
        a.checked_neg()
    }

    fn difference(&self, a: i64, b: i64) -> Option<i64> {
        a.checked_sub(b)
    }
}

impl OrderedGroup for CheckedI64 {
    fn less_than(&self, a: i64, b: i64) -> bool {
        a < b
    }
}

/// `f64` under addition.
///
/// This is NOT a group: rounding makes addition non-associative, so results
/// are only approximately equal to the exact partial sums. NaN is ordered
/// below nothing; callers should not store it.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FloatSum;

impl AbelianGroup for FloatSum {
    type Elem = f64;

    fn identity(&self) -> f64 {
        0.0
    }

    fn combine(&self, a: f64, b: f64) -> Option<f64> {
        Some(a + b)
    }

    fn invert(&self, a: f64) -> Option<f64> {
        Some(-a)
    }
}

impl OrderedGroup for FloatSum {
    fn less_than(&self, a: f64, b: f64) -> bool {
        a < b
    }
}

/// A group axiom (or order axiom) checked by [`check_group_laws`] and
/// [`check_order_laws`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    /// The combination of two samples was not representable.
    Closure,
    Associativity,
    Commutativity,
    Identity,
    Inverse,
    Totality,
    Transitivity,
    TranslationInvariance,
}

/// A failed law together with the sample elements that witness it.
#[derive(Debug, Clone, PartialEq)]
pub struct LawViolation<E> {
    pub law: Law,
    pub witness: Vec<E>,
}

/// Outcome of a law check. Violations are data, not errors.
pub type LawReport<E> = Result<(), LawViolation<E>>;

fn violation<E: Copy>(law: Law, witness: &[E]) -> LawViolation<E> {
    LawViolation { law, witness: witness.to_vec() }
}

/// Checks the abelian group laws on every pair and triple drawn from `samples`.
///
/// Laws are tried in the order associativity, commutativity, identity,
/// inverse; the first failure is returned with its witness.
pub fn check_group_laws<G: AbelianGroup>(ctx: &G, samples: &[G::Elem]) -> LawReport<G::Elem> {
    assert!(!samples.is_empty(), "law check needs at least one sample");
    let e = ctx.identity();

    for &a in samples {
        for &b in samples {
            for &c in samples {
                let w = [a, b, c];
                let left = ctx.combine(a, b).and_then(|ab| ctx.combine(ab, c));
                let right = ctx.combine(b, c).and_then(|bc| ctx.combine(a, bc));
                match (left, right) {
                    (Some(l), Some(r)) if l == r => {}
                    (Some(_), Some(_)) => return Err(violation(Law::Associativity, &w)),
                    _ => return Err(violation(Law::Closure, &w)),
                }
            }
        }
    }

    for &a in samples {
        for &b in samples {
            match (ctx.combine(a, b), ctx.combine(b, a)) {
                (Some(l), Some(r)) if l == r => {}
                (Some(_), Some(_)) => return Err(violation(Law::Commutativity, &[a, b])),
                _ => return Err(violation(Law::Closure, &[a, b])),
            }
        }
    }

    for &a in samples {
        if ctx.combine(a, e) != Some(a) || ctx.combine(e, a) != Some(a) {
            return Err(violation(Law::Identity, &[a]));
        }
    }

    for &a in samples {
        let back = ctx.invert(a).and_then(|inv| ctx.combine(a, inv));
        if back != Some(e) {
            return Err(violation(Law::Inverse, &[a]));
        }
    }

    Ok(())
}

/// Checks totality, transitivity and translation invariance of the order.
pub fn check_order_laws<G: OrderedGroup>(ctx: &G, samples: &[G::Elem]) -> LawReport<G::Elem> {
    assert!(!samples.is_empty(), "law check needs at least one sample");

    for &a in samples {
        for &b in samples {
            let (lt, gt) = (ctx.less_than(a, b), ctx.less_than(b, a));
            // exactly one of a < b, b < a, a == b
            let ok = match (lt, gt) {
                (true, true) => false,
                (false, false) => a == b,
                _ => a != b,
            };
            if !ok {
                return Err(violation(Law::Totality, &[a, b]));
            }
        }
    }

    for &a in samples {
        for &b in samples {
            for &c in samples {
                if ctx.less_than(a, b) && ctx.less_than(b, c) && !ctx.less_than(a, c) {
                    return Err(violation(Law::Transitivity, &[a, b, c]));
                }
                if ctx.less_than(a, b) {
                    match (ctx.combine(a, c), ctx.combine(b, c)) {
                        (Some(ac), Some(bc)) if ctx.less_than(ac, bc) => {}
                        (Some(_), Some(_)) => {
                            return Err(violation(Law::TranslationInvariance, &[a, b, c]))
                        }
                        _ => return Err(violation(Law::Closure, &[a, b, c])),
                    }
                }
            }
        }
    }

    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Integer subtraction posing as a group operation.
    struct Subtraction;

    impl AbelianGroup for Subtraction {
        type Elem = i64;
        fn identity(&self) -> i64 {
            0
        }
        fn combine(&self, a: i64, b: i64) -> Option<i64> {
            a.checked_sub(b)
        }
        fn invert(&self, a: i64) -> Option<i64> {
            Some(a)
        }
    }

    #[test]
    fn integers_satisfy_group_laws() {
        assert_eq!(check_group_laws(&CheckedI64, &[-3, 0, 7]), Ok(()));
        assert_eq!(check_order_laws(&CheckedI64, &[-3, 0, 7]), Ok(()));
    }

    #[test]
    fn integers_exhaustive_small_range() {
        let samples: Vec<i64> = (-6..=6).collect();
        assert_eq!(check_group_laws(&CheckedI64, &samples), Ok(()));
        assert_eq!(check_order_laws(&CheckedI64, &samples), Ok(()));
    }

    #[test]
    fn subtraction_breaks_associativity() {
        let err = check_group_laws(&Subtraction, &[1]).unwrap_err();
        assert_eq!(err.law, Law::Associativity);
        assert_eq!(err.witness, vec![1, 1, 1]);
    }

    #[test]
    fn float_addition_is_not_associative() {
        let samples = [1e16, 1.0, -1e16];
        let err = check_group_laws(&FloatSum, &samples).unwrap_err();
        assert_eq!(err.law, Law::Associativity);
        let (a, b, c) = (err.witness[0], err.witness[1], err.witness[2]);
        assert_ne!((a + b) + c, a + (b + c));
    }

    #[test]
    fn overflow_is_a_closure_violation() {
        let err = check_group_laws(&CheckedI64, &[i64::MAX, 1]).unwrap_err();
        assert_eq!(err.law, Law::Closure);
        assert_eq!(CheckedI64.invert(i64::MIN), None);
    }
}
