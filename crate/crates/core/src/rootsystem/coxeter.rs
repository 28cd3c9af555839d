//! Simple roots, Coxeter matrices and Dynkin-diagram identification.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{dot, generic_direction, norm, scaled};
use crate::lp::separation_margin;
use crate::tolerance::ToleranceContext;
use crate::vectorset::{SemiStar, Vector, VectorSet};

/// Largest dihedral order accepted when reading an edge label off an angle.
pub const MAX_EDGE_LABEL: usize = 64;

/// Name of an irreducible finite Coxeter group.
///
/// Identification always returns the canonical form: rank one is `I1`,
/// `A2` is `I2(3)`, `B2` is `I2(4)` and `D3` is `A3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoxeterLabel {
    I1,
    A(usize),
    B(usize),
    D(usize),
    I2(usize),
    H3,
    H4,
    F4,
    E6,
    E7,
    E8,
}

impl CoxeterLabel {
    /// Builds a label from a family letter and its parameter (the rank, or
    /// the dihedral order for `I2`).
    pub fn from_family(family: &str, n: usize) -> Result<Self> {
        let label = match family.trim().to_ascii_uppercase().as_str() {
            "A" => Self::A(n),
            "B" => Self::B(n),
            "D" => Self::D(n),
            "I2" => Self::I2(n),
            "I1" | "I" if n == 1 => Self::I1,
            "H" if n == 3 => Self::H3,
            "H" if n == 4 => Self::H4,
            "F" if n == 4 => Self::F4,
            "E" if n == 6 => Self::E6,
            "E" if n == 7 => Self::E7,
            "E" if n == 8 => Self::E8,
            _ => return Err(Error::InvalidCatalog(format!("no root system {family}:{n}"))),
        };
        label.validate()?;
        Ok(label)
    }

    pub fn family_and_parameter(&self) -> (&'static str, usize) {
        match *self {
            Self::I1 => ("I1", 1),
            Self::A(n) => ("A", n),
            Self::B(n) => ("B", n),
            Self::D(n) => ("D", n),
            Self::I2(p) => ("I2", p),
            Self::H3 => ("H", 3),
            Self::H4 => ("H", 4),
            Self::F4 => ("F", 4),
            Self::E6 => ("E", 6),
            Self::E7 => ("E", 7),
            Self::E8 => ("E", 8),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::A(n) => n >= 1,
            Self::B(n) => n >= 2,
            Self::D(n) => n >= 3,
            Self::I2(p) => p >= 3,
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidCatalog(format!("{self} is not a valid root system")))
        }
    }

    pub fn rank(&self) -> usize {
        match *self {
            Self::I1 => 1,
            Self::A(n) | Self::B(n) | Self::D(n) => n,
            Self::I2(_) => 2,
            Self::H3 => 3,
            Self::H4 | Self::F4 => 4,
            Self::E6 => 6,
            Self::E7 => 7,
            Self::E8 => 8,
        }
    }

    /// Number of roots.
    pub fn root_count(&self) -> usize {
        match *self {
            Self::I1 => 2,
            Self::A(n) => n * (n + 1),
            Self::B(n) => 2 * n * n,
            Self::D(n) => 2 * n * (n - 1),
            Self::I2(p) => 2 * p,
            Self::H3 => 30,
            Self::H4 => 120,
            Self::F4 => 48,
            Self::E6 => 72,
            Self::E7 => 126,
            Self::E8 => 240,
        }
    }

    /// Order of the Weyl group (saturating on overflow).
    pub fn weyl_order(&self) -> u128 {
        let fact = |n: usize| (1..=n as u128).fold(1u128, |a, b| a.saturating_mul(b));
        match *self {
            Self::I1 => 2,
            Self::A(n) => fact(n + 1),
            Self::B(n) => fact(n).saturating_mul(1u128 << n.min(127)),
            Self::D(n) => fact(n).saturating_mul(1u128 << (n - 1).min(127)),
            Self::I2(p) => 2 * p as u128,
            Self::H3 => 120,
            Self::H4 => 14_400,
            Self::F4 => 1_152,
            Self::E6 => 51_840,
            Self::E7 => 2_903_040,
            Self::E8 => 696_729_600,
        }
    }

    /// Whether the Weyl group has two root orbits, so that two independent
    /// orbit scales still give a root system.
    pub fn has_two_orbits(&self) -> bool {
        match *self {
            Self::B(_) | Self::F4 => true,
            Self::I2(p) => p % 2 == 0,
            _ => false,
        }
    }

    /// Canonical form under the low-rank coincidences.
    pub fn canonical(self) -> Self {
        match self {
            Self::A(1) => Self::I1,
            Self::A(2) => Self::I2(3),
            Self::B(2) => Self::I2(4),
            Self::D(3) => Self::A(3),
            other => other,
        }
    }
}

impl fmt::Display for CoxeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::I1 => write!(f, "I1"),
            Self::A(n) => write!(f, "A{n}"),
            Self::B(n) => write!(f, "B{n}"),
            Self::D(n) => write!(f, "D{n}"),
            Self::I2(p) => write!(f, "I2({p})"),
            Self::H3 => write!(f, "H3"),
            Self::H4 => write!(f, "H4"),
            Self::F4 => write!(f, "F4"),
            Self::E6 => write!(f, "E6"),
            Self::E7 => write!(f, "E7"),
            Self::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for CoxeterLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidCatalog(format!("cannot parse label {s:?}"));
        if s.eq_ignore_ascii_case("I1") {
            return Ok(Self::I1);
        }
        if let Some(inner) = s
            .strip_prefix("I2(")
            .or_else(|| s.strip_prefix("i2("))
            .and_then(|r| r.strip_suffix(')'))
        {
            return Self::from_family("I2", inner.parse().map_err(|_| bad())?);
        }
        let split = s.find(|c: char| c.is_ascii_digit()).ok_or_else(bad)?;
        let (family, n) = s.split_at(split);
        Self::from_family(family, n.parse().map_err(|_| bad())?)
    }
}

impl Serialize for CoxeterLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The Coxeter type of an irreducible root system together with the root
/// length of each of its orbits, ascending. Two-orbit families always carry
/// two entries, even when both orbits happen to have the same length.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoxeterType {
    pub label: CoxeterLabel,
    pub rank: usize,
    pub orbit_lengths: Vec<f64>,
}

/// Simple roots of the positive system cut out by `c`: the positive roots
/// that are not in the cone of the other positive roots.
///
/// If `c` is orthogonal to some root it is nudged along a fixed sequence of
/// generic directions before giving up.
pub fn simple_roots(set: &VectorSet, c: &[f64]) -> Result<Vec<Vector>> {
    let tol = set.tol();
    let star = generic_semi_star(set, c)?;
    let positive = star.owned_vectors(set);
    let floor = tol.margin_floor();
    let mut simple = Vec::new();
    for (i, p) in positive.iter().enumerate() {
        let others = positive
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.as_slice());
        if separation_margin(set.dim(), p, others)? > floor {
            simple.push(Vector(p.clone()));
        }
    }
    Ok(simple)
}

fn generic_semi_star(set: &VectorSet, c: &[f64]) -> Result<SemiStar> {
    let nc = norm(c);
    if c.len() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            found: c.len(),
        });
    }
    for attempt in 0..16 {
        let mut dir = c.to_vec();
        if attempt > 0 {
            let nudge = generic_direction(set.dim(), 100 + attempt);
            let s = 1e-3 * attempt as f64 * nc.max(1.0);
            for (d, n) in dir.iter_mut().zip(scaled(&nudge, s)) {
                *d += n;
            }
        }
        if let Ok(star) = SemiStar::from_direction(set, &dir) {
            return Ok(star);
        }
    }
    Err(Error::NonGenericDirection)
}

/// Coxeter edge label `m` for two simple roots at angle `θ = π - π/m`.
pub fn edge_label(a: &[f64], b: &[f64], tol: &ToleranceContext) -> Result<usize> {
    let cos = dot(a, b) / (norm(a) * norm(b));
    let slack = 10.0 * tol.eps_rel;
    if cos.abs() <= slack {
        return Ok(2);
    }
    if cos > 0.0 {
        return Err(Error::UnmatchedDiagram(format!(
            "simple roots at acute angle (cos = {cos})"
        )));
    }
    let theta = cos.clamp(-1.0, 1.0).acos();
    let m = (std::f64::consts::PI / (std::f64::consts::PI - theta)).round() as usize;
    if !(3..=MAX_EDGE_LABEL).contains(&m) {
        return Err(Error::UnmatchedDiagram(format!("edge angle cos = {cos} out of range")));
    }
    if (cos + (std::f64::consts::PI / m as f64).cos()).abs() >= slack {
        return Err(Error::UnmatchedDiagram(format!(
            "angle with cos = {cos} is not of the form π - π/m"
        )));
    }
    Ok(m)
}

/// Coxeter matrix of a list of simple roots (diagonal entries are 1).
pub fn coxeter_matrix(simple: &[Vector], tol: &ToleranceContext) -> Result<Vec<Vec<usize>>> {
    let n = simple.len();
    let mut m = vec![vec![1; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let l = edge_label(&simple[i], &simple[j], tol)?;
            m[i][j] = l;
            m[j][i] = l;
        }
    }
    Ok(m)
}

/// Matches a connected Coxeter diagram against the finite-type list.
pub fn label_from_matrix(m: &[Vec<usize>]) -> Result<CoxeterLabel> {
    let n = m.len();
    let unmatched = |why: &str| Error::UnmatchedDiagram(format!("{why}: {m:?}"));
    match n {
        0 => return Err(unmatched("empty diagram")),
        1 => return Ok(CoxeterLabel::I1),
        2 if m[0][1] == 2 => return Err(unmatched("disconnected")),
        2 => return Ok(CoxeterLabel::I2(m[0][1])),
        _ => {}
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && m[i][j] >= 3).collect())
        .collect();
    let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(unmatched("disconnected"));
    }
    if edges != n - 1 {
        return Err(unmatched("diagram has a cycle"));
    }
    let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
    if max_degree <= 2 {
        let start = (0..n).find(|&i| adj[i].len() == 1).expect("a path has an endpoint");
        let mut path = vec![start];
        while path.len() < n {
            let last = *path.last().unwrap();
            let next = adj[last]
                .iter()
                .copied()
                .find(|j| !path.contains(j))
                .expect("path continues");
            path.push(next);
        }
        let labels: Vec<usize> = path.windows(2).map(|w| m[w[0]][w[1]]).collect();
        let special: Vec<(usize, usize)> = labels
            .iter()
            .copied()
            .enumerate()
            .filter(|&(_, l)| l != 3)
            .collect();
        let at_end = |pos: usize| pos == 0 || pos == n - 2;
        return match special.as_slice() {
            [] => Ok(CoxeterLabel::A(n)),
            [(pos, 4)] if at_end(*pos) => Ok(CoxeterLabel::B(n)),
            [(1, 4)] if n == 4 => Ok(CoxeterLabel::F4),
            [(pos, 5)] if at_end(*pos) && n == 3 => Ok(CoxeterLabel::H3),
            [(pos, 5)] if at_end(*pos) && n == 4 => Ok(CoxeterLabel::H4),
            _ => Err(unmatched("path diagram of no finite type")),
        };
    }
    let branch: Vec<usize> = (0..n).filter(|&i| adj[i].len() >= 3).collect();
    if branch.len() != 1 || adj[branch[0]].len() != 3 {
        return Err(unmatched("tree diagram of no finite type"));
    }
    if (0..n).any(|i| adj[i].iter().any(|&j| m[i][j] != 3)) {
        return Err(unmatched("branched diagram with a label above 3"));
    }
    let centre = branch[0];
    let mut arms: Vec<usize> = adj[centre]
        .iter()
        .map(|&first| {
            let (mut prev, mut cur, mut len) = (centre, first, 1);
            while let Some(&next) = adj[cur].iter().find(|&&j| j != prev) {
                prev = cur;
                cur = next;
                len += 1;
            }
            len
        })
        .collect();
    arms.sort_unstable();
    match arms.as_slice() {
        [1, 1, _] => Ok(CoxeterLabel::D(n)),
        [1, 2, 2] => Ok(CoxeterLabel::E6),
        [1, 2, 3] => Ok(CoxeterLabel::E7),
        [1, 2, 4] => Ok(CoxeterLabel::E8),
        _ => Err(unmatched("branched diagram of no finite type")),
    }
}

/// Simple roots joined by an odd edge label are conjugate; the classes of
/// that relation are the root orbits. Returns one norm per class, ascending.
fn orbit_lengths(simple: &[Vector], matrix: &[Vec<usize>]) -> Vec<f64> {
    let n = simple.len();
    let mut class = vec![usize::MAX; n];
    let mut lengths = Vec::new();
    for start in 0..n {
        if class[start] != usize::MAX {
            continue;
        }
        let id = lengths.len();
        class[start] = id;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if class[j] == usize::MAX && matrix[i][j] % 2 == 1 && i != j {
                    class[j] = id;
                    stack.push(j);
                }
            }
        }
        lengths.push(simple[start].norm());
    }
    lengths.sort_by(f64::total_cmp);
    lengths
}

/// Distinct vector norms in `set`, ascending.
pub fn distinct_norms(set: &VectorSet) -> Vec<f64> {
    let tol = set.tol();
    let mut out: Vec<f64> = Vec::new();
    let mut norms: Vec<f64> = set.representatives().map(norm).collect();
    norms.sort_by(f64::total_cmp);
    for x in norms {
        match out.last() {
            Some(&last) if tol.approx_eq(last, x) => {}
            _ => out.push(x),
        }
    }
    out
}

/// Coxeter type of an irreducible root system.
pub fn identify_type(set: &VectorSet) -> Result<CoxeterType> {
    let components = super::decompose(set);
    if components.len() != 1 {
        return Err(Error::NotIrreducible {
            components: components.len(),
        });
    }
    if !super::is_root_system(set).is_root_system {
        return Err(Error::NotRootSystem);
    }
    let simple = simple_roots(set, &generic_direction(set.dim(), 3))?;
    let rank = set.rank();
    if simple.len() != rank {
        return Err(Error::Consistency(format!(
            "found {} simple roots for a rank-{rank} root system",
            simple.len()
        )));
    }
    let matrix = coxeter_matrix(&simple, set.tol())?;
    let label = label_from_matrix(&matrix)?.canonical();
    if label.root_count() != set.len() {
        return Err(Error::Consistency(format!(
            "diagram {label} predicts {} roots, found {}",
            label.root_count(),
            set.len()
        )));
    }
    Ok(CoxeterType {
        label,
        rank,
        orbit_lengths: orbit_lengths(&simple, &matrix),
    })
}
