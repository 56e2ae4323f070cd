//! Finite unions of intervals with open/closed endpoints.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::spec::ParamRange;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        (if self.lo_closed {
            x >= self.lo
        } else {
            x > self.lo
        }) && (if self.hi_closed {
            x <= self.hi
        } else {
            x < self.hi
        })
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi && self.lo_closed && self.hi_closed
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            return write!(f, "{{{}}}", fmt_bound(self.lo));
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            fmt_bound(self.lo),
            fmt_bound(self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Formats a bound with five decimals, trailing zeros trimmed.
pub fn fmt_bound(x: f64) -> String {
    let s = format!("{x:.5}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Sorted, pairwise disjoint, non-empty intervals.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    pub fn full(range: ParamRange) -> Self {
        IntervalSet::from_intervals(vec![Interval {
            lo: range.lo,
            lo_closed: range.lo_closed,
            hi: range.hi,
            hi_closed: range.hi_closed,
        }])
    }

    /// Drops empty intervals and merges the rest where they overlap or
    /// touch at a closed endpoint.
    pub fn from_intervals(mut raw: Vec<Interval>) -> Self {
        raw.retain(|i| !i.is_empty());
        raw.sort_by(|a, b| a.lo.total_cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            if let Some(last) = out.last_mut() {
                let joins =
                    iv.lo < last.hi || (iv.lo == last.hi && (last.hi_closed || iv.lo_closed));
                if joins {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                        last.hi_closed = iv.hi_closed;
                    } else if iv.hi == last.hi {
                        last.hi_closed |= iv.hi_closed;
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|i| i.contains(x))
    }

    /// Interior endpoints, i.e. those strictly inside `range`.
    pub fn interior_endpoints(&self, range: ParamRange) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .intervals
            .iter()
            .flat_map(|i| [i.lo, i.hi])
            .filter(|&x| x > range.lo && x < range.hi)
            .collect();
        v.dedup();
        v
    }

    /// Complement relative to `range`.
    pub fn complement_within(&self, range: ParamRange) -> IntervalSet {
        let mut out = Vec::new();
        let mut lo = range.lo;
        let mut lo_closed = range.lo_closed;
        for iv in &self.intervals {
            out.push(Interval {
                lo,
                lo_closed,
                hi: iv.lo,
                hi_closed: !iv.lo_closed,
            });
            lo = iv.hi;
            lo_closed = !iv.hi_closed;
        }
        out.push(Interval {
            lo,
            lo_closed,
            hi: range.hi,
            hi_closed: range.hi_closed,
        });
        IntervalSet::from_intervals(out)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("empty");
        }
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" U ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, lc: bool, hi: f64, hc: bool) -> Interval {
        Interval {
            lo,
            lo_closed: lc,
            hi,
            hi_closed: hc,
        }
    }

    #[test]
    fn display() {
        let s = IntervalSet::from_intervals(vec![
            iv(0.6780719, true, 1.0, false),
            iv(0.0, false, 0.3219281, true),
        ]);
        assert_eq!(s.to_string(), "(0, 0.32193] U [0.67807, 1)");
        assert_eq!(IntervalSet::empty().to_string(), "empty");
        let single = IntervalSet::from_intervals(vec![iv(0.25, true, 0.25, true)]);
        assert_eq!(single.to_string(), "{0.25}");
    }

    #[test]
    fn merging() {
        let s = IntervalSet::from_intervals(vec![
            iv(0.0, true, 0.5, true),
            iv(0.5, false, 0.7, false),
            iv(0.2, true, 0.3, true),
            iv(0.8, false, 0.8, true),
        ]);
        assert_eq!(s.intervals().len(), 1);
        assert_eq!(s.intervals()[0], iv(0.0, true, 0.7, false));

        let apart =
            IntervalSet::from_intervals(vec![iv(0.0, true, 0.5, false), iv(0.5, false, 1.0, true)]);
        assert_eq!(apart.intervals().len(), 2);
        assert!(!apart.contains(0.5));
    }

    #[test]
    fn complement() {
        let range = ParamRange::open(0.0, 1.0);
        let s =
            IntervalSet::from_intervals(vec![iv(0.0, false, 0.3, true), iv(0.7, true, 1.0, false)]);
        let c = s.complement_within(range);
        assert_eq!(c.intervals(), &[iv(0.3, false, 0.7, false)]);
        assert_eq!(c.complement_within(range), s);
        assert_eq!(
            IntervalSet::empty().complement_within(range),
            IntervalSet::full(range)
        );
        assert!(IntervalSet::full(range).complement_within(range).is_empty());
    }
}
