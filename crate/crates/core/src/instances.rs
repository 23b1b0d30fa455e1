//! Directed road networks and the generators that build them.
//!
//! Road counts follow the density knob `m`: an instance on `N` cities gets
//! `round_half_up(m * N * ln N)` roads. Planted variants contain a uniformly
//! random Hamiltonian cycle whose `N` edges count toward that total.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::rng_from_seed;
use crate::tour::{City, Tour};

pub const MIN_CITIES: usize = 3;

/// Largest number of roads a simple digraph on `n` cities can hold.
pub fn max_roads(n: usize) -> usize {
    n * n.saturating_sub(1)
}

/// Number of roads for density multiplier `m` on `n` cities,
/// `m * n * ln n` rounded half-up.
pub fn road_count(m: f64, n: usize) -> Result<usize> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::param("m", format!("must be a positive finite number, got {m}")));
    }
    if n < MIN_CITIES {
        return Err(Error::TooFewCities(n));
    }
    let exact = m * n as f64 * (n as f64).ln();
    let rounded = (exact + 0.5).floor();
    let max = max_roads(n);
    if rounded > max as f64 {
        return Err(Error::TooDense { n, roads: rounded as usize, max });
    }
    Ok(rounded as usize)
}

/// Uniformly random cyclic order on `n` cities, deterministic in `seed`.
pub fn random_cycle(n: usize, seed: u64) -> Result<Tour> {
    if n < MIN_CITIES {
        return Err(Error::TooFewCities(n));
    }
    Ok(Tour::random(n, &mut rng_from_seed(seed)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    RandomPlanted,
    RandomUnplanted,
    StridePlanted,
    StrideUnplanted,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::RandomPlanted,
        GeneratorKind::RandomUnplanted,
        GeneratorKind::StridePlanted,
        GeneratorKind::StrideUnplanted,
    ];

    pub fn is_planted(self) -> bool {
        matches!(self, GeneratorKind::RandomPlanted | GeneratorKind::StridePlanted)
    }

    pub fn is_stride(self) -> bool {
        matches!(self, GeneratorKind::StridePlanted | GeneratorKind::StrideUnplanted)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::RandomPlanted => "random-planted",
            GeneratorKind::RandomUnplanted => "random-unplanted",
            GeneratorKind::StridePlanted => "stride-planted",
            GeneratorKind::StrideUnplanted => "stride-unplanted",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::param("kind", format!("unknown generator kind `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n_cities: usize,
    pub m: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n_cities: usize, m: f64, seed: u64) -> Result<Self> {
        let spec = GeneratorSpec { kind, n_cities, m, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.road_count().map(|_| ())
    }

    pub fn road_count(&self) -> Result<usize> {
        road_count(self.m, self.n_cities)
    }

    pub fn generate(&self) -> Result<Instance> {
        if self.kind.is_stride() {
            gen_stride(self)
        } else {
            gen_random(self)
        }
    }
}

/// Where an instance came from. Not stored in instance files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum Provenance {
    Generated(GeneratorSpec),
    Augmented { base: Box<Provenance>, added: usize, seed: u64 },
    Loaded,
    Manual,
}

/// A directed graph of one-way roads between `N` cities.
#[derive(Clone, Debug)]
pub struct Instance {
    n: usize,
    roads: Vec<(City, City)>,
    adjacency: AdjacencyBits,
    planted: Option<Tour>,
    provenance: Provenance,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.roads == other.roads && self.planted == other.planted
    }
}

impl Instance {
    fn empty(n: usize, provenance: Provenance) -> Self {
        Instance { n, roads: Vec::new(), adjacency: AdjacencyBits::new(n), planted: None, provenance }
    }

    /// Builds an instance from an explicit road list, validating every road
    /// and the planted cycle if one is given.
    pub fn from_roads(n: usize, roads: impl IntoIterator<Item = (City, City)>, planted: Option<Tour>) -> Result<Self> {
        if n < MIN_CITIES {
            return Err(Error::TooFewCities(n));
        }
        let mut inst = Instance::empty(n, Provenance::Manual);
        for (u, v) in roads {
            inst.check_city(u)?;
            inst.check_city(v)?;
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !inst.insert(u, v) {
                return Err(Error::DuplicateRoad(u, v));
            }
        }
        if let Some(cycle) = planted {
            if cycle.len() != n {
                return Err(Error::SizeMismatch { tour: cycle.len(), instance: n });
            }
            if let Some((u, v)) = cycle.edges().find(|&(u, v)| !inst.is_road(u, v)) {
                return Err(Error::Infeasible(format!("planted cycle uses missing road {u} -> {v}")));
            }
            inst.planted = Some(cycle);
        }
        Ok(inst)
    }

    /// Every ordered pair of distinct cities.
    pub fn complete(n: usize) -> Result<Self> {
        Instance::from_roads(n, (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))), None)
    }

    pub fn n_cities(&self) -> usize {
        self.n
    }

    pub fn road_count(&self) -> usize {
        self.roads.len()
    }

    /// Roads in insertion order.
    pub fn roads(&self) -> &[(City, City)] {
        &self.roads
    }

    pub fn planted_cycle(&self) -> Option<&Tour> {
        self.planted.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Directed membership test with range checking.
    pub fn has_edge(&self, u: City, v: City) -> Result<bool> {
        self.check_city(u)?;
        self.check_city(v)?;
        Ok(self.is_road(u, v))
    }

    /// Unchecked membership test for the solver's inner loop. Panics if a
    /// city is out of range.
    #[inline]
    pub fn is_road(&self, u: City, v: City) -> bool {
        self.adjacency.get(u * self.n + v)
    }

    /// Adds uniformly random new roads until the instance has
    /// `target_roads`. Returns a copy; instances already at or above the
    /// target come back unchanged.
    pub fn augment(&self, target_roads: usize, seed: u64) -> Result<Instance> {
        let max = max_roads(self.n);
        if target_roads > max {
            return Err(Error::TooDense { n: self.n, roads: target_roads, max });
        }
        let mut out = self.clone();
        if self.roads.len() >= target_roads {
            return Ok(out);
        }
        let added = target_roads - self.roads.len();
        let mut rng = rng_from_seed(seed);
        out.fill_random(target_roads, &mut rng);
        out.provenance = Provenance::Augmented { base: Box::new(self.provenance.clone()), added, seed };
        Ok(out)
    }

    fn check_city(&self, c: City) -> Result<()> {
        if c < self.n {
            Ok(())
        } else {
            Err(Error::CityOutOfRange { city: c, n: self.n })
        }
    }

    /// Returns false if the road was already present.
    fn insert(&mut self, u: City, v: City) -> bool {
        let idx = u * self.n + v;
        if self.adjacency.get(idx) {
            return false;
        }
        self.adjacency.set(idx);
        self.roads.push((u, v));
        true
    }

    fn plant(&mut self, cycle: Tour) {
        for (u, v) in cycle.edges() {
            self.insert(u, v);
        }
        self.planted = Some(cycle);
    }

    /// Rejection sampling over ordered pairs without self-loops.
    fn fill_random<R: Rng + ?Sized>(&mut self, target: usize, rng: &mut R) {
        debug_assert!(target <= max_roads(self.n));
        while self.roads.len() < target {
            let u = rng.random_range(0..self.n);
            let mut v = rng.random_range(0..self.n - 1);
            if v >= u {
                v += 1;
            }
            self.insert(u, v);
        }
    }

    /// Serializes to the line-oriented instance format.
    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "hcp {} {}", self.n, self.roads.len())?;
        if let Some(p) = &self.planted {
            writeln!(w, "planted {p}")?;
        }
        for (u, v) in &self.roads {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::with_capacity(8 * self.roads.len() + 32);
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("instance text is ASCII")
    }

    /// Parses the format written by [`Instance::write_to`].
    pub fn parse(text: &str) -> Result<Instance> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [tag, n, r] = fields[..] else {
            return Err(Error::parse(hline, "expected header `hcp <N> <R>`"));
        };
        if tag != "hcp" {
            return Err(Error::parse(hline, "expected header `hcp <N> <R>`"));
        }
        let n: usize = parse_num(hline, n)?;
        let r: usize = parse_num(hline, r)?;
        if n < MIN_CITIES {
            return Err(Error::TooFewCities(n));
        }
        if r > max_roads(n) {
            return Err(Error::TooDense { n, roads: r, max: max_roads(n) });
        }

        let mut planted = None;
        let mut roads = Vec::with_capacity(r);
        let mut lines = lines.peekable();
        if let Some(&(pline, l)) = lines.peek() {
            if let Some(rest) = l.strip_prefix("planted") {
                let order = rest.split_whitespace().map(|t| parse_num(pline, t)).collect::<Result<Vec<City>>>()?;
                if order.len() != n {
                    return Err(Error::parse(
                        pline,
                        format!("planted cycle lists {} cities, expected {n}", order.len()),
                    ));
                }
                planted = Some(Tour::from_order(order).map_err(|e| Error::parse(pline, e.to_string()))?);
                lines.next();
            }
        }
        for (lno, l) in lines {
            let mut it = l.split_whitespace();
            let (Some(u), Some(v), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::parse(lno, "expected a road `<u> <v>`"));
            };
            roads.push((parse_num(lno, u)?, parse_num(lno, v)?));
        }
        if roads.len() != r {
            return Err(Error::parse(hline, format!("header declares {r} roads but {} follow", roads.len())));
        }
        Ok(Instance::from_roads(n, roads, planted)?.with_provenance(Provenance::Loaded))
    }
}

impl FromStr for Instance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Instance::parse(s)
    }
}

fn parse_num<T: FromStr>(line: usize, tok: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(line, format!("invalid integer `{tok}`")))
}

#[derive(Clone, Debug)]
struct AdjacencyBits(Vec<u64>);

impl AdjacencyBits {
    fn new(n: usize) -> Self {
        AdjacencyBits(vec![0; (n * n).div_ceil(64)])
    }

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] & (1 << (i & 63)) != 0
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }
}

/// Random road set, with or without a planted cycle.
pub fn gen_random(spec: &GeneratorSpec) -> Result<Instance> {
    if spec.kind.is_stride() {
        return Err(Error::param("kind", format!("{} is not a random generator", spec.kind)));
    }
    let n = spec.n_cities;
    let quota = spec.road_count()?;
    if spec.kind.is_planted() && quota < n {
        return Err(Error::Infeasible(format!("{quota} roads cannot hold a planted cycle on {n} cities")));
    }
    let mut rng = rng_from_seed(spec.seed);
    let mut inst = Instance::empty(n, Provenance::Generated(*spec));
    if spec.kind.is_planted() {
        // Same draw as `random_cycle(n, seed)`.
        inst.plant(Tour::random(n, &mut rng));
    }
    inst.fill_random(quota, &mut rng);
    Ok(inst)
}

/// Forward edges `a -> a + s` in stride order.
///
/// Round 0 is the classic pattern: stride `s` emits `a = 0, s+1, 2(s+1), ...`
/// while `a + s < n`, for `s = 1, 2, ...`. Round `r` repeats the strides with
/// `a` starting at `r` (only for `r <= s`), so the rounds together enumerate
/// each forward pair exactly once. Every edge points from a lower to a higher
/// city, hence the graph is acyclic.
pub fn stride_edges(n: usize) -> impl Iterator<Item = (City, City)> {
    (0..n.saturating_sub(1)).flat_map(move |round| {
        (1.max(round)..n).flat_map(move |s| (round..n.saturating_sub(s)).step_by(s + 1).map(move |a| (a, a + s)))
    })
}

/// Deterministic stride-pattern roads, optionally on top of a planted cycle.
pub fn gen_stride(spec: &GeneratorSpec) -> Result<Instance> {
    if !spec.kind.is_stride() {
        return Err(Error::param("kind", format!("{} is not a stride generator", spec.kind)));
    }
    let n = spec.n_cities;
    let quota = spec.road_count()?;
    let mut inst = Instance::empty(n, Provenance::Generated(*spec));
    if spec.kind.is_planted() {
        if quota < n {
            return Err(Error::Infeasible(format!("{quota} roads cannot hold a planted cycle on {n} cities")));
        }
        inst.plant(random_cycle(n, spec.seed)?);
    }
    let mut edges = stride_edges(n);
    while inst.road_count() < quota {
        let Some((u, v)) = edges.next() else {
            return Err(Error::Infeasible(format!(
                "stride pattern on {n} cities runs out at {} of {quota} roads",
                inst.road_count()
            )));
        };
        inst.insert(u, v);
    }
    Ok(inst)
}
