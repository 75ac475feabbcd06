//! The rational preperiodic portrait: cycles found through dynatomic
//! polynomials, then tail trees grown by taking rational preimages until
//! nothing new appears.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::dynatomic::{rational_periodic_points, PeriodicSearch};
use crate::dynmap::{default_escape_height, RationalMap};
use crate::error::{Error, Result};
use crate::qarith::ProjPoint;

/// Discovering more points than this means something is wrong.
pub const POINT_CAP: usize = 100_000;

/// Default iteration budget for [`brute_force_preperiodic`].
pub const ORACLE_MAX_ITER: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TailPoint {
    pub point: ProjPoint,
    /// Steps to reach a cycle; at least 1.
    pub depth: usize,
    pub image: ProjPoint,
    /// The periodic point the orbit first lands on.
    pub entry: ProjPoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completeness {
    /// Periodic points are complete only up to this primitive period.
    pub n_max: usize,
    pub periodic_roots_complete: bool,
    pub preimage_roots_complete: bool,
    pub bad_primes_complete: bool,
}

impl Completeness {
    pub fn is_clean(&self) -> bool {
        self.periodic_roots_complete && self.preimage_roots_complete && self.bad_primes_complete
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portrait {
    pub map: RationalMap,
    /// Each cycle starts at its least point; cycles sorted by that point.
    pub cycles: Vec<Vec<ProjPoint>>,
    /// Sorted by point.
    pub tails: Vec<TailPoint>,
    pub completeness: Completeness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counts {
    pub per: usize,
    pub tail: usize,
    pub preper: usize,
    /// Sorted ascending.
    pub cycle_lengths: Vec<usize>,
    pub max_tail_depth: usize,
}

impl Portrait {
    pub fn periodic_points(&self) -> impl Iterator<Item = &ProjPoint> {
        self.cycles.iter().flatten()
    }

    pub fn tail_points(&self) -> impl Iterator<Item = &ProjPoint> {
        self.tails.iter().map(|t| &t.point)
    }

    pub fn points(&self) -> BTreeSet<ProjPoint> {
        self.periodic_points().chain(self.tail_points()).cloned().collect()
    }

    pub fn is_periodic(&self, p: &ProjPoint) -> bool {
        self.periodic_points().any(|q| q == p)
    }

    pub fn tail(&self, p: &ProjPoint) -> Option<&TailPoint> {
        self.tails
            .binary_search_by(|t| t.point.cmp(p))
            .ok()
            .map(|i| &self.tails[i])
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.is_periodic(p) || self.tail(p).is_some()
    }

    pub fn cycle_of(&self, p: &ProjPoint) -> Option<&[ProjPoint]> {
        let periodic = match self.tail(p) {
            Some(t) => &t.entry,
            None => p,
        };
        self.cycles
            .iter()
            .find(|c| c.contains(periodic))
            .map(|c| c.as_slice())
    }

    /// Longest finite orbit: tail depth plus the length of the cycle reached.
    pub fn longest_orbit(&self) -> usize {
        let from_tails = self.tails.iter().map(|t| {
            t.depth + self.cycle_of(&t.point).map_or(0, |c| c.len())
        });
        self.cycles
            .iter()
            .map(|c| c.len())
            .chain(from_tails)
            .max()
            .unwrap_or(0)
    }

    pub fn counts(&self) -> Counts {
        classify(self)
    }
}

pub fn classify(portrait: &Portrait) -> Counts {
    let per = portrait.cycles.iter().map(|c| c.len()).sum();
    let tail = portrait.tails.len();
    let mut cycle_lengths: Vec<usize> = portrait.cycles.iter().map(|c| c.len()).collect();
    cycle_lengths.sort_unstable();
    Counts {
        per,
        tail,
        preper: per + tail,
        cycle_lengths,
        max_tail_depth: portrait.tails.iter().map(|t| t.depth).max().unwrap_or(0),
    }
}

/// Portrait with periodic points of primitive period up to `n_max`.
pub fn build_portrait(map: &RationalMap, n_max: usize) -> Result<Portrait> {
    let search = rational_periodic_points(map, n_max)?;
    portrait_from_search(map, &search)
}

fn cycles_from(map: &RationalMap, periodic: &BTreeSet<ProjPoint>) -> Result<Vec<Vec<ProjPoint>>> {
    let mut seen = BTreeSet::new();
    let mut cycles = Vec::new();
    for start in periodic {
        if seen.contains(start) {
            continue;
        }
        let mut cycle = vec![start.clone()];
        let mut q = map.apply(start);
        while &q != start {
            if !periodic.contains(&q) {
                return Err(Error::Invariant(format!(
                    "cycle through {start} leaves the periodic set at {q}"
                )));
            }
            cycle.push(q.clone());
            q = map.apply(&q);
        }
        seen.extend(cycle.iter().cloned());
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// Tail trees grown from an already computed periodic search.
pub fn portrait_from_search(map: &RationalMap, search: &PeriodicSearch) -> Result<Portrait> {
    let periodic: BTreeSet<ProjPoint> = search.points.iter().map(|p| p.point.clone()).collect();
    // Starting from the least unvisited point makes each cycle start minimal.
    let cycles = cycles_from(map, &periodic)?;

    let mut tails: BTreeMap<ProjPoint, TailPoint> = BTreeMap::new();
    let mut queue: VecDeque<ProjPoint> = periodic.iter().cloned().collect();
    let mut preimage_roots_complete = true;
    while let Some(q) = queue.pop_front() {
        let roots = map.preimages(&q)?;
        preimage_roots_complete &= roots.complete;
        let (depth, entry) = match tails.get(&q) {
            Some(t) => (t.depth + 1, t.entry.clone()),
            None => (1, q.clone()),
        };
        for p in roots.points() {
            if periodic.contains(p) || tails.contains_key(p) {
                continue;
            }
            tails.insert(
                p.clone(),
                TailPoint {
                    point: p.clone(),
                    depth,
                    image: q.clone(),
                    entry: entry.clone(),
                },
            );
            if periodic.len() + tails.len() > POINT_CAP {
                return Err(Error::PortraitCap(POINT_CAP));
            }
            queue.push_back(p.clone());
        }
    }

    let portrait = Portrait {
        map: map.clone(),
        cycles,
        tails: tails.into_values().collect(),
        completeness: Completeness {
            n_max: search.n_max,
            periodic_roots_complete: search.roots_complete,
            preimage_roots_complete,
            bad_primes_complete: map.bad_primes_complete(),
        },
    };
    verify(&portrait)?;
    Ok(portrait)
}

/// Every tail point reaches its entry point in exactly `depth` steps, and no
/// earlier iterate is periodic.
pub fn verify(portrait: &Portrait) -> Result<()> {
    let periodic: BTreeSet<&ProjPoint> = portrait.periodic_points().collect();
    for t in &portrait.tails {
        if periodic.contains(&t.point) {
            return Err(Error::Invariant(format!("{} is both tail and periodic", t.point)));
        }
        let mut q = t.point.clone();
        for step in 1..=t.depth {
            q = portrait.map.apply(&q);
            if step == 1 && q != t.image {
                return Err(Error::Invariant(format!("{} does not map to {}", t.point, t.image)));
            }
            if periodic.contains(&q) != (step == t.depth) {
                return Err(Error::Invariant(format!(
                    "{} reaches the cycles after {step} steps, not {}",
                    t.point, t.depth
                )));
            }
        }
        if q != t.entry {
            return Err(Error::Invariant(format!("{} enters at {q}, not {}", t.point, t.entry)));
        }
    }
    for c in &portrait.cycles {
        let n = c.len();
        for (i, p) in c.iter().enumerate() {
            if portrait.map.apply(p) != c[(i + 1) % n] {
                return Err(Error::Invariant(format!("cycle broken at {p}")));
            }
        }
    }
    Ok(())
}

/// Every `[a:b]` with `gcd(a, b) = 1`, `|a|, |b| ≤ h`, whose orbit repeats
/// within `max_iter` steps while staying below the escape height.
pub fn brute_force_preperiodic(map: &RationalMap, h: u64, max_iter: usize) -> BTreeSet<ProjPoint> {
    let cutoff = default_escape_height();
    let h = h as i64;
    let mut found: BTreeSet<ProjPoint> = (1..=h)
        .into_par_iter()
        .flat_map_iter(|b| {
            (-h..=h)
                .filter(move |a| a.gcd(&b) == 1)
                .map(move |a| ProjPoint::new(BigInt::from(a), BigInt::from(b)).expect("b > 0"))
                .filter(|p| map.orbit_with_cutoff(p, max_iter, &cutoff).is_preperiodic())
                .collect::<Vec<_>>()
        })
        .collect();
    let inf = ProjPoint::infinity();
    if map.orbit_with_cutoff(&inf, max_iter, &cutoff).is_preperiodic() {
        found.insert(inf);
    }
    found
}

/// Portrait points of height at most `h`.
pub fn points_up_to_height(portrait: &Portrait, h: u64) -> BTreeSet<ProjPoint> {
    let h = BigInt::from(h);
    portrait
        .points()
        .into_iter()
        .filter(|p| p.height() <= h)
        .collect()
}
