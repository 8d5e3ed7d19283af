//! Local beating relations `≽_(r,s)`, the global influence relation `≽`,
//! and exhaustive checkers for the structural claims about it.
//!
//! `p ≽_(r,s) q` holds when, for every profile `x` with `x_p = x_q = s`,
//! moving `p` up to `r` yields at least the output of moving `q` up to `r`.
//! `p ≽ q` is the conjunction over all `r > s`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{LadderError, Result};
use crate::game::{check_cap, GameLadder, OutputTable, Profile, ValueSource, LEVEL_TOLERANCE};

/// Above this many profiles relations are computed by evaluating the game
/// on demand instead of materializing its table.
pub const TABLE_THRESHOLD: u128 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PairClass {
    Dominates,
    Dominated,
    Equivalent,
    Incomparable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalVerdict {
    pub holds: bool,
    /// A base profile (`x_p = x_q = s`) where promoting `q` beats promoting `p`.
    pub witness: Option<Profile>,
}

/// Checks `p ≽_(r,s) q` by sweeping all `j^(n−2)` placements of the other players.
pub fn beats_local(game: &GameLadder, p: usize, q: usize, r: u8, s: u8) -> Result<LocalVerdict> {
    check_pair_args(game, p, q, r, s)?;
    check_cap(game.profile_count(), game.enum_cap())?;
    Ok(beats_local_with(game, p, q, r, s))
}

fn check_pair_args(game: &GameLadder, p: usize, q: usize, r: u8, s: u8) -> Result<()> {
    game.check_player(p)?;
    game.check_player(q)?;
    if p == q {
        return Err(LadderError::DimensionMismatch(format!(
            "players must differ, got {} twice",
            p + 1
        )));
    }
    if r <= s {
        return Err(LadderError::InvalidLevels { r, s });
    }
    if s == 0 || r > game.levels() {
        return Err(LadderError::DimensionMismatch(format!(
            "levels ({r},{s}) outside 1..={}",
            game.levels()
        )));
    }
    Ok(())
}

/// Unchecked sweep over any value source.
pub fn beats_local_with<V: ValueSource + ?Sized>(
    source: &V,
    p: usize,
    q: usize,
    r: u8,
    s: u8,
) -> LocalVerdict {
    let n = source.players();
    let j = source.position_types();
    let others: Vec<usize> = (0..n).filter(|&a| a != p && a != q).collect();
    let mut x = vec![1u8; n];
    x[p] = s;
    x[q] = s;
    loop {
        x[p] = r;
        let up_p = source.value_of(&x);
        x[p] = s;
        x[q] = r;
        let up_q = source.value_of(&x);
        x[q] = s;
        if up_p + LEVEL_TOLERANCE < up_q {
            return LocalVerdict {
                holds: false,
                witness: Some(Profile::new(x)),
            };
        }
        // odometer over the other players
        let mut carry = true;
        for &a in &others {
            if x[a] < j {
                x[a] += 1;
                carry = false;
                break;
            }
            x[a] = 1;
        }
        if carry {
            return LocalVerdict {
                holds: true,
                witness: None,
            };
        }
    }
}

/// `p ≽ q`.
pub fn global_geq(game: &GameLadder, p: usize, q: usize) -> Result<bool> {
    check_pair_args(game, p, q, 2, 1)?;
    check_cap(game.profile_count(), game.enum_cap())?;
    Ok(global_geq_with(game, p, q))
}

pub fn global_geq_with<V: ValueSource + ?Sized>(source: &V, p: usize, q: usize) -> bool {
    let j = source.position_types();
    (1..=j).all(|s| (s + 1..=j).all(|r| beats_local_with(source, p, q, r, s).holds))
}

/// The `≽` relation as an `n × n` boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationMatrix {
    n: usize,
    geq: Vec<bool>,
}

impl RelationMatrix {
    /// Builds a matrix from explicit rows; the diagonal is forced to `true`.
    pub fn from_rows(rows: Vec<Vec<bool>>) -> Self {
        let n = rows.len();
        let mut geq = Vec::with_capacity(n * n);
        for (p, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), n, "relation rows must be square");
            geq.extend(row.into_iter().enumerate().map(|(q, v)| v || p == q));
        }
        RelationMatrix { n, geq }
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn geq(&self, p: usize, q: usize) -> bool {
        self.geq[p * self.n + q]
    }

    /// `p ≻ q`.
    pub fn dominates(&self, p: usize, q: usize) -> bool {
        self.geq(p, q) && !self.geq(q, p)
    }

    /// `p ~ q`.
    pub fn equivalent(&self, p: usize, q: usize) -> bool {
        self.geq(p, q) && self.geq(q, p)
    }

    pub fn class(&self, p: usize, q: usize) -> PairClass {
        match (self.geq(p, q), self.geq(q, p)) {
            (true, true) => PairClass::Equivalent,
            (true, false) => PairClass::Dominates,
            (false, true) => PairClass::Dominated,
            (false, false) => PairClass::Incomparable,
        }
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.geq.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    /// The matrix of the reversed relation (`q ≽' p` iff `p ≽ q`).
    pub fn reversed(&self) -> RelationMatrix {
        let n = self.n;
        let geq = (0..n * n).map(|idx| self.geq(idx % n, idx / n)).collect();
        RelationMatrix { n, geq }
    }

    /// Classes of `~`, each sorted, ordered by smallest member.
    pub fn equivalence_classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for p in 0..self.n {
            match classes.iter_mut().find(|c| self.equivalent(c[0], p)) {
                Some(c) => c.push(p),
                None => classes.push(vec![p]),
            }
        }
        classes
    }
}

/// Computes `≽` for every ordered pair. Uses a materialized table when the
/// game is small enough, otherwise evaluates the representation directly.
pub fn relation_matrix(game: &GameLadder) -> Result<RelationMatrix> {
    check_cap(game.profile_count(), game.enum_cap())?;
    if game.profile_count() <= TABLE_THRESHOLD {
        Ok(relation_matrix_with(&OutputTable::new(game)?))
    } else {
        Ok(relation_matrix_with(game))
    }
}

pub fn relation_matrix_with<V: ValueSource + ?Sized>(source: &V) -> RelationMatrix {
    let n = source.players();
    let geq = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (p, q) = (idx / n, idx % n);
            p == q || global_geq_with(source, p, q)
        })
        .collect();
    RelationMatrix { n, geq }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Linearity {
    pub linear: bool,
    /// First incomparable pair in lexicographic order.
    pub witness: Option<(usize, usize)>,
}

pub fn linearity(m: &RelationMatrix) -> Linearity {
    let n = m.players();
    let witness = (0..n)
        .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
        .find(|&(p, q)| m.class(p, q) == PairClass::Incomparable);
    Linearity {
        linear: witness.is_none(),
        witness,
    }
}

pub fn is_linear(game: &GameLadder) -> Result<Linearity> {
    Ok(linearity(&relation_matrix(game)?))
}

fn distinct_triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |p| {
        (0..n).flat_map(move |q| (0..n).map(move |r| (p, q, r)))
    })
    .filter(|&(p, q, r)| p != q && q != r && p != r)
}

/// Triples with `p ≽ q`, `q ≽ r` but not `p ≽ r`.
pub fn transitivity_violations(m: &RelationMatrix) -> Vec<(usize, usize, usize)> {
    distinct_triples(m.players())
        .filter(|&(p, q, r)| m.geq(p, q) && m.geq(q, r) && !m.geq(p, r))
        .collect()
}

/// Triples with `p ≻ q`, `q ≻ r` but not `p ≻ r`.
pub fn strict_transitivity_violations(m: &RelationMatrix) -> Vec<(usize, usize, usize)> {
    distinct_triples(m.players())
        .filter(|&(p, q, r)| m.dominates(p, q) && m.dominates(q, r) && !m.dominates(p, r))
        .collect()
}

/// Triples where `p ≻ q ~ r` or `p ~ q ≻ r` without `p ≻ r`.
pub fn mixed_transitivity_violations(m: &RelationMatrix) -> Vec<(usize, usize, usize)> {
    distinct_triples(m.players())
        .filter(|&(p, q, r)| {
            let chain = (m.dominates(p, q) && m.equivalent(q, r))
                || (m.equivalent(p, q) && m.dominates(q, r));
            chain && !m.dominates(p, r)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub reflexive_violations: Vec<usize>,
    pub symmetric_violations: Vec<(usize, usize)>,
    pub transitive_violations: Vec<(usize, usize, usize)>,
}

impl EquivalenceReport {
    pub fn holds(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive
    }
}

/// Checks that `~` is reflexive, symmetric and transitive.
pub fn check_equivalence(m: &RelationMatrix) -> EquivalenceReport {
    let n = m.players();
    let reflexive_violations: Vec<usize> = (0..n).filter(|&p| !m.equivalent(p, p)).collect();
    let symmetric_violations: Vec<(usize, usize)> = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .filter(|&(p, q)| m.equivalent(p, q) != m.equivalent(q, p))
        .collect();
    let transitive_violations: Vec<(usize, usize, usize)> = distinct_triples(n)
        .filter(|&(p, q, r)| m.equivalent(p, q) && m.equivalent(q, r) && !m.equivalent(p, r))
        .collect();
    EquivalenceReport {
        reflexive: reflexive_violations.is_empty(),
        symmetric: symmetric_violations.is_empty(),
        transitive: transitive_violations.is_empty(),
        reflexive_violations,
        symmetric_violations,
        transitive_violations,
    }
}

/// Ordered partition of the players into `~`-classes, strongest first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerDecomposition {
    pub layers: Vec<Vec<usize>>,
    /// `membership[p]` is the index of the layer holding `p`.
    pub membership: Vec<usize>,
}

/// Layers of a linear game, verified before they are returned: players in
/// a layer are equivalent and every earlier layer strictly dominates every
/// later one.
pub fn layers(game: &GameLadder) -> Result<LayerDecomposition> {
    layers_of(&relation_matrix(game)?)
}

pub fn layers_of(m: &RelationMatrix) -> Result<LayerDecomposition> {
    if let Some((p, q)) = linearity(m).witness {
        return Err(LadderError::NotLinear { p, q });
    }
    let mut classes = m.equivalence_classes();
    for class in &classes {
        for &a in class {
            for &b in class {
                if !m.equivalent(a, b) {
                    return Err(LadderError::InternalInconsistency(format!(
                        "players {} and {} share a class but are not equivalent",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
    }
    // In a transitive tournament the strongest class dominates the most others.
    let beaten = |c: &Vec<usize>| {
        (0..m.players())
            .filter(|&b| m.dominates(c[0], b))
            .count()
    };
    classes.sort_by_key(|c| std::cmp::Reverse(beaten(c)));
    for (a, upper) in classes.iter().enumerate() {
        for lower in &classes[a + 1..] {
            for &u in upper {
                for &l in lower {
                    if !m.dominates(u, l) {
                        return Err(LadderError::InternalInconsistency(format!(
                            "layer order broken: player {} does not dominate player {}",
                            u + 1,
                            l + 1
                        )));
                    }
                }
            }
        }
    }
    let mut membership = vec![0; m.players()];
    for (idx, class) in classes.iter().enumerate() {
        for &p in class {
            membership[p] = idx;
        }
    }
    Ok(LayerDecomposition {
        layers: classes,
        membership,
    })
}

/// Machine-readable relation summary. Players are 1-based.
#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub geq: Vec<Vec<bool>>,
    pub classes: Vec<Vec<usize>>,
    pub linear: bool,
    pub violations: ViolationSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationSet {
    pub transitivity: Vec<[usize; 3]>,
}

impl RelationReport {
    pub fn new(m: &RelationMatrix) -> Self {
        let classes = match layers_of(m) {
            Ok(d) => d.layers,
            Err(_) => m.equivalence_classes(),
        };
        RelationReport {
            geq: m.rows(),
            classes: classes
                .into_iter()
                .map(|c| c.into_iter().map(|p| p + 1).collect())
                .collect(),
            linear: linearity(m).linear,
            violations: ViolationSet {
                transitivity: transitivity_violations(m)
                    .into_iter()
                    .map(|(p, q, r)| [p + 1, q + 1, r + 1])
                    .collect(),
            },
        }
    }
}
