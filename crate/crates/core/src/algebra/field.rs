use std::fmt::Debug;

/// Minimal field interface shared by the exact coefficient domains.
///
/// Methods take references so that big-number domains avoid needless clones.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;
    fn over(&self, o: &Self) -> Self {
        self.times(&o.inv())
    }
}
