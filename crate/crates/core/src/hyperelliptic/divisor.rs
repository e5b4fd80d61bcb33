use std::collections::BTreeMap;
use std::fmt;

use crate::hyperelliptic::curve::Place;

/// A formal sum of places with nonzero integer multiplicities.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    pts: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn point(p: Place) -> Divisor {
        Self::from_pairs([(p, 1)])
    }

    pub fn infinity(n: i64) -> Divisor {
        Self::from_pairs([(Place::Infinity, n)])
    }

    pub fn from_pairs<I: IntoIterator<Item = (Place, i64)>>(it: I) -> Divisor {
        let mut d = Divisor::zero();
        for (p, n) in it {
            d.add_at(p, n);
        }
        d
    }

    pub fn add_at(&mut self, p: Place, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.pts.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.pts.remove(&p);
        }
    }

    pub fn get(&self, p: &Place) -> i64 {
        self.pts.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.pts.iter().map(|(p, &n)| (p, n))
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.pts.keys()
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn degree(&self) -> i64 {
        self.pts.iter().map(|(p, &n)| n * p.degree()).sum()
    }

    /// All multiplicities nonnegative (the zero divisor counts).
    pub fn is_effective(&self) -> bool {
        self.pts.values().all(|&n| n > 0)
    }

    pub fn add(&self, o: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, &n) in &o.pts {
            d.add_at(p.clone(), n);
        }
        d
    }

    pub fn neg(&self) -> Divisor {
        self.scale(-1)
    }

    pub fn sub(&self, o: &Divisor) -> Divisor {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i64) -> Divisor {
        if k == 0 {
            return Divisor::zero();
        }
        Divisor {
            pts: self.pts.iter().map(|(p, &n)| (p.clone(), n * k)).collect(),
        }
    }

    pub fn positive_part(&self) -> Divisor {
        Self::from_pairs(self.iter().filter(|(_, n)| *n > 0).map(|(p, n)| (p.clone(), n)))
    }

    pub fn negative_part(&self) -> Divisor {
        Self::from_pairs(self.iter().filter(|(_, n)| *n < 0).map(|(p, n)| (p.clone(), -n)))
    }

    /// `D >= E` coefficientwise.
    pub fn dominates(&self, o: &Divisor) -> bool {
        self.sub(o).is_effective()
    }

    /// The part supported away from infinity.
    pub fn finite_part(&self) -> Divisor {
        Self::from_pairs(self.iter().filter(|(p, _)| !p.is_infinity()).map(|(p, n)| (p.clone(), n)))
    }
}

impl fmt::Debug for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(p, n)| format!("{n}*{p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
