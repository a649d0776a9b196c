//! Boxes (Cartesian products of intervals) and finite sets of boxes.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoxError {
    #[error("boxes range over different variables ({left} vs {right})")]
    VariableMismatch { left: String, right: String },
}

/// An axis-aligned box: one interval per variable, in a fixed variable order.
///
/// A box is empty as soon as any dimension is empty; empty boxes are kept in
/// a canonical form (every dimension `EMPTY`) so that `==` is meaningful.
#[derive(Clone, PartialEq)]
pub struct IntBox {
    dims: Vec<(String, Interval)>,
}

impl IntBox {
    pub fn new<S: Into<String>>(dims: impl IntoIterator<Item = (S, Interval)>) -> IntBox {
        let mut b = IntBox {
            dims: dims.into_iter().map(|(n, i)| (n.into(), i)).collect(),
        };
        b.normalize();
        b
    }

    /// The canonical empty box over `vars`.
    pub fn empty_over(vars: &[String]) -> IntBox {
        IntBox {
            dims: vars.iter().map(|v| (v.clone(), Interval::EMPTY)).collect(),
        }
    }

    fn normalize(&mut self) {
        if self.dims.iter().any(|(_, i)| i.is_empty()) {
            for (_, i) in &mut self.dims {
                *i = Interval::EMPTY;
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().any(|(_, i)| i.is_empty())
    }

    pub fn dim(&self) -> usize {
        self.dims.len()
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.dims.iter().map(|(n, _)| n.as_str())
    }

    pub fn var_names(&self) -> Vec<String> {
        self.dims.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        self.dims.iter().map(|(_, i)| *i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Interval)> {
        self.dims.iter().map(|(n, i)| (n.as_str(), *i))
    }

    /// Interval of the `idx`-th dimension.
    pub fn at(&self, idx: usize) -> Interval {
        self.dims[idx].1
    }

    pub fn get(&self, var: &str) -> Option<Interval> {
        self.dims.iter().find(|(n, _)| n == var).map(|(_, i)| *i)
    }

    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.dims.iter().position(|(n, _)| n == var)
    }

    /// Replaces the `idx`-th interval. Emptiness propagates to the whole box.
    pub fn set(&mut self, idx: usize, value: Interval) {
        self.dims[idx].1 = value;
        self.normalize();
    }

    pub fn map_intervals(&self, mut f: impl FnMut(usize, Interval) -> Interval) -> IntBox {
        let mut b = IntBox {
            dims: self
                .dims
                .iter()
                .enumerate()
                .map(|(k, (n, i))| (n.clone(), f(k, *i)))
                .collect(),
        };
        b.normalize();
        b
    }

    fn check_same_vars(&self, other: &IntBox) -> Result<(), BoxError> {
        if self.vars().eq(other.vars()) {
            Ok(())
        } else {
            Err(BoxError::VariableMismatch {
                left: self.var_names().join(","),
                right: other.var_names().join(","),
            })
        }
    }

    pub fn intersect(&self, other: &IntBox) -> Result<IntBox, BoxError> {
        self.check_same_vars(other)?;
        Ok(self.map_intervals(|k, i| i.intersect(&other.at(k))))
    }

    pub fn hull(&self, other: &IntBox) -> Result<IntBox, BoxError> {
        self.check_same_vars(other)?;
        if self.is_empty() {
            return Ok(other.clone());
        }
        if other.is_empty() {
            return Ok(self.clone());
        }
        Ok(self.map_intervals(|k, i| i.hull(&other.at(k))))
    }

    pub fn is_subset(&self, other: &IntBox) -> bool {
        self.is_empty()
            || (self.vars().eq(other.vars())
                && self.intervals().zip(other.intervals()).all(|(a, b)| a.is_subset(&b)))
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        p.len() == self.dim() && self.intervals().zip(p).all(|(i, &v)| i.contains(v))
    }

    /// Largest dimension width (`+inf` for unbounded boxes, `0` for empty ones).
    pub fn max_width(&self) -> f64 {
        self.intervals()
            .filter_map(|i| i.width().ok())
            .fold(0.0, f64::max)
    }

    /// `self \ interior(other)` as at most `2n` interior-disjoint boxes.
    ///
    /// Slabs are peeled per dimension in variable order, lower slab first;
    /// the remaining core is narrowed to `other` in that dimension before the
    /// next one is processed.
    pub fn difference(&self, other: &IntBox) -> Result<BoxSet, BoxError> {
        self.difference_with(other, &vec![false; self.dim()])
    }

    /// Like [`IntBox::difference`], but dimensions flagged `integral` are
    /// treated as integer lattices: slabs stop one unit short of `other`, so
    /// the output and `self ∩ other` partition the lattice points of `self`
    /// exactly, with no shared faces.
    pub fn difference_with(&self, other: &IntBox, integral: &[bool]) -> Result<BoxSet, BoxError> {
        self.check_same_vars(other)?;
        let core = self.intersect(other)?;
        if self.is_empty() {
            return Ok(BoxSet::default());
        }
        if core.is_empty() {
            return Ok(BoxSet::from_boxes(vec![self.clone()]));
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        for k in 0..self.dim() {
            let (rl, rh) = rest.at(k).bounds().expect("rest is non-empty");
            let (cl, ch) = core.at(k).bounds().expect("core is non-empty");
            let step = if integral.get(k).copied().unwrap_or(false) { 1.0 } else { 0.0 };
            if rl < cl {
                let mut slab = rest.clone();
                slab.set(k, Interval::new(rl, cl - step));
                if !slab.is_empty() {
                    out.push(slab);
                }
            }
            if ch < rh {
                let mut slab = rest.clone();
                slab.set(k, Interval::new(ch + step, rh));
                if !slab.is_empty() {
                    out.push(slab);
                }
            }
            rest.set(k, core.at(k));
        }
        Ok(BoxSet::from_boxes(out))
    }
}

impl fmt::Display for IntBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "empty");
        }
        for (k, (n, i)) in self.dims.iter().enumerate() {
            if k > 0 {
                write!(f, " × ")?;
            }
            write!(f, "{n}:{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntBox({self})")
    }
}

impl Serialize for IntBox {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_empty() {
            return serializer.serialize_str("empty");
        }
        let mut map = serializer.serialize_map(Some(self.dims.len()))?;
        for (n, i) in &self.dims {
            map.serialize_entry(n, i)?;
        }
        map.end()
    }
}

/// A finite set of non-empty boxes over identical variables.
#[derive(Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BoxSet {
    boxes: Vec<IntBox>,
}

impl BoxSet {
    /// Collects the non-empty members of `boxes`.
    pub fn from_boxes(boxes: Vec<IntBox>) -> BoxSet {
        BoxSet {
            boxes: boxes.into_iter().filter(|b| !b.is_empty()).collect(),
        }
    }

    pub fn single(b: IntBox) -> BoxSet {
        BoxSet::from_boxes(vec![b])
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, IntBox> {
        self.boxes.iter()
    }

    pub fn boxes(&self) -> &[IntBox] {
        &self.boxes
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        self.boxes.iter().any(|b| b.contains_point(p))
    }

    /// Interval hull of all members, or `None` for the empty set.
    pub fn hull(&self) -> Option<IntBox> {
        let mut it = self.boxes.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, b| acc.hull(b).expect("members share variables")))
    }

    pub fn union(&self, other: &BoxSet) -> BoxSet {
        let mut boxes = self.boxes.clone();
        boxes.extend(other.boxes.iter().cloned());
        BoxSet { boxes }
    }
}

impl fmt::Debug for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.boxes.iter()).finish()
    }
}

impl<'a> IntoIterator for &'a BoxSet {
    type Item = &'a IntBox;
    type IntoIter = std::slice::Iter<'a, IntBox>;
    fn into_iter(self) -> Self::IntoIter {
        self.boxes.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::{MAX_INT, MAX_UINT};

    fn b2(x: (f64, f64), y: (f64, f64)) -> IntBox {
        IntBox::new([("x", Interval::new(x.0, x.1)), ("y", Interval::new(y.0, y.1))])
    }

    #[test]
    fn intersect_dimensionwise() {
        let a = b2((0.0, 20.0), (0.0, 30.0));
        let b = b2((10.0, 40.0), (0.0, 10.0));
        assert_eq!(a.intersect(&b).unwrap(), b2((10.0, 20.0), (0.0, 10.0)));
    }

    #[test]
    fn intersect_with_empty_is_empty() {
        let a = b2((0.0, 20.0), (0.0, 30.0));
        let e = IntBox::empty_over(&["x".into(), "y".into()]);
        assert!(a.intersect(&e).unwrap().is_empty());
    }

    #[test]
    fn intersect_inside_original_domain() {
        let contracted = b2((1.0, 1000.0), (1.0, 1000.0));
        let original = b2((1.0, MAX_INT), (0.0, 1000.0));
        assert_eq!(contracted.intersect(&original).unwrap(), contracted);
    }

    #[test]
    fn mismatched_variables_are_rejected() {
        let a = b2((0.0, 1.0), (0.0, 1.0));
        let b = IntBox::new([("x", Interval::new(0.0, 1.0)), ("z", Interval::new(0.0, 1.0))]);
        assert!(matches!(a.intersect(&b), Err(BoxError::VariableMismatch { .. })));
    }

    #[test]
    fn difference_one_dimension() {
        let a = IntBox::new([("x", Interval::new(0.0, 10.0))]);
        let b = IntBox::new([("x", Interval::new(0.0, 5.0))]);
        let d = a.difference(&b).unwrap();
        assert_eq!(d.boxes(), &[IntBox::new([("x", Interval::new(5.0, 10.0))])]);
    }

    #[test]
    fn difference_two_dimensions_peels_in_order() {
        let a = b2((0.0, 2.0), (0.0, 2.0));
        let b = b2((0.0, 1.0), (0.0, 1.0));
        let d = a.difference(&b).unwrap();
        assert_eq!(d.boxes(), &[b2((1.0, 2.0), (0.0, 2.0)), b2((0.0, 1.0), (1.0, 2.0))]);
    }

    #[test]
    fn difference_of_disjoint_boxes_is_the_minuend() {
        let a = b2((0.0, 2.0), (0.0, 2.0));
        let b = b2((5.0, 6.0), (0.0, 1.0));
        assert_eq!(a.difference(&b).unwrap().boxes(), std::slice::from_ref(&a));
    }

    #[test]
    fn difference_of_afnp_domain() {
        let outer = b2((1.0, MAX_INT), (0.0, 1000.0));
        let inner = b2((1.0, 1000.0), (1.0, 1000.0));
        let real = outer.difference(&inner).unwrap();
        assert_eq!(
            real.boxes(),
            &[b2((1000.0, MAX_INT), (0.0, 1000.0)), b2((1.0, 1000.0), (0.0, 1.0))]
        );
        let lattice = outer.difference_with(&inner, &[true, true]).unwrap();
        assert_eq!(
            lattice.boxes(),
            &[b2((1001.0, MAX_INT), (0.0, 1000.0)), b2((1.0, 1000.0), (0.0, 0.0))]
        );
    }

    #[test]
    fn lattice_difference_upper_slab() {
        let a = b2((0.0, 20.0), (0.0, MAX_UINT));
        let b = b2((0.0, 20.0), (0.0, 20.0));
        let d = a.difference_with(&b, &[true, true]).unwrap();
        assert_eq!(d.boxes(), &[b2((0.0, 20.0), (21.0, MAX_UINT))]);
    }

    #[test]
    fn boxset_hull() {
        let s = BoxSet::from_boxes(vec![b2((0.0, 1.0), (0.0, 1.0)), b2((3.0, 4.0), (-1.0, 0.0))]);
        assert_eq!(s.hull().unwrap(), b2((0.0, 4.0), (-1.0, 1.0)));
        assert!(BoxSet::default().hull().is_none());
    }

    #[test]
    fn display_box() {
        assert_eq!(b2((0.0, 20.0), (0.0, 20.0)).to_string(), "x:[0, 20] × y:[0, 20]");
    }
}
