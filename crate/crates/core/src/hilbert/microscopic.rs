use std::collections::HashMap;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::collective::CollectiveLabel;
use super::operator::Operator;
use super::space::{dimension_cap, FactorKind, SpaceSpec};
use crate::linalg::dagger;
use crate::{CsrMatrix, Error, Matrix, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomLevel {
    G = 0,
    E = 1,
    R = 2,
}

impl AtomLevel {
    const ALL: [AtomLevel; 3] = [AtomLevel::G, AtomLevel::E, AtomLevel::R];
}

/// Enumerated per-atom basis of `N` three-level atoms.
///
/// States are ordered by their base-3 code with atom 0 the most significant
/// digit (`g < e < r`).
#[derive(Debug, Clone)]
pub struct MicroscopicBasis {
    n_atoms: usize,
    blockade: bool,
    max_excited: Option<usize>,
    states: Vec<Vec<AtomLevel>>,
    index: HashMap<Vec<AtomLevel>, usize>,
    space: SpaceSpec,
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of strings that survive the blockade / excitation filters.
pub(crate) fn microscopic_dim(n: usize, blockade: bool, max_excited: Option<usize>) -> u128 {
    let top = max_excited.unwrap_or(n).min(n);
    (0..=top)
        .map(|k| {
            let per = if blockade { 1 + k as u128 } else { 1u128 << k };
            binomial(n, k) * per
        })
        .sum()
}

/// Enumerate the microscopic atomic space.
///
/// With `blockade` strings holding two or more `r` are removed. `max_excited`
/// additionally drops strings with more than that many non-ground atoms,
/// which is how large ensembles are kept tractable when the dynamics never
/// leaves a low-excitation sector.
pub fn microscopic_basis(
    n_atoms: usize,
    blockade: bool,
    max_excited: Option<usize>,
    label: impl Into<String>,
) -> Result<MicroscopicBasis> {
    if n_atoms == 0 {
        return Err(Error::invalid("microscopic basis needs at least one atom"));
    }
    let cap = dimension_cap();
    let count = microscopic_dim(n_atoms, blockade, max_excited);
    if count > cap as u128 {
        return Err(Error::ResourceLimit {
            what: format!("microscopic basis of {n_atoms} atoms"),
            requested: usize::try_from(count).unwrap_or(usize::MAX),
            cap,
        });
    }
    let max_exc = max_excited.unwrap_or(n_atoms);
    let mut states = Vec::with_capacity(count as usize);
    let mut cur = Vec::with_capacity(n_atoms);
    enumerate(n_atoms, blockade, max_exc, &mut cur, 0, 0, &mut states);
    debug_assert_eq!(states.len() as u128, count);

    let index = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let space = SpaceSpec::single(
        label,
        states.len(),
        FactorKind::MicroscopicAtomic {
            n_atoms,
            blockade,
            max_excited,
        },
    )?;
    Ok(MicroscopicBasis {
        n_atoms,
        blockade,
        max_excited,
        states,
        index,
        space,
    })
}

fn enumerate(
    n: usize,
    blockade: bool,
    max_exc: usize,
    cur: &mut Vec<AtomLevel>,
    excited: usize,
    rydberg: usize,
    out: &mut Vec<Vec<AtomLevel>>,
) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    for lvl in AtomLevel::ALL {
        let exc = excited + (lvl != AtomLevel::G) as usize;
        let ryd = rydberg + (lvl == AtomLevel::R) as usize;
        if exc > max_exc || (blockade && ryd > 1) {
            continue;
        }
        cur.push(lvl);
        enumerate(n, blockade, max_exc, cur, exc, ryd, out);
        cur.pop();
    }
}

impl MicroscopicBasis {
    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn blockade(&self) -> bool {
        self.blockade
    }

    pub fn max_excited(&self) -> Option<usize> {
        self.max_excited
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.space
    }

    pub fn state(&self, index: usize) -> &[AtomLevel] {
        &self.states[index]
    }

    pub fn index_of(&self, levels: &[AtomLevel]) -> Option<usize> {
        self.index.get(levels).copied()
    }

    /// Number of atoms in `level` for basis state `index`.
    pub fn count(&self, index: usize, level: AtomLevel) -> usize {
        self.states[index].iter().filter(|&&l| l == level).count()
    }

    fn build(&self, mut f: impl FnMut(&[AtomLevel], &mut dyn FnMut(Vec<AtomLevel>, f64))) -> Operator {
        let d = self.dim();
        let mut m = Vec::new();
        for (col, s) in self.states.iter().enumerate() {
            f(s, &mut |target, w| {
                // transitions leaving the enumerated space are projected out
                if let Some(&row) = self.index.get(&target) {
                    m.push((row, col, C64::from(w)));
                }
            });
        }
        Operator::from_sparse(self.space.clone(), CsrMatrix::from_triplets(d, d, m)).expect("square by construction")
    }

    /// Single-atom transition `|to_i⟩⟨from_i|`.
    pub fn transition(&self, atom: usize, to: AtomLevel, from: AtomLevel) -> Result<Operator> {
        if atom >= self.n_atoms {
            return Err(Error::invalid(format!("atom {atom} out of range")));
        }
        Ok(self.build(|s, push| {
            if s[atom] == from {
                let mut t = s.to_vec();
                t[atom] = to;
                push(t, 1.0);
            }
        }))
    }

    /// `Σ_i |to_i⟩⟨from_i|`.
    pub fn collective_transition(&self, to: AtomLevel, from: AtomLevel) -> Operator {
        self.build(|s, push| {
            for i in 0..s.len() {
                if s[i] == from {
                    let mut t = s.to_vec();
                    t[i] = to;
                    push(t, 1.0);
                }
            }
        })
    }

    /// Diagonal operator counting atoms in `level`.
    pub fn level_count_op(&self, level: AtomLevel) -> Operator {
        self.collective_transition(level, level)
    }

    /// Isometry from the symmetric collective states into this basis.
    ///
    /// Only the collective labels whose support lies inside the enumerated
    /// space are included; `|E^j⟩` and `|E^jR⟩` are uniform superpositions
    /// over all strings with the matching level counts.
    pub fn symmetric_embedding(&self) -> SymmetricEmbedding {
        let n = self.n_atoms;
        let max_exc = self.max_excited.unwrap_or(n).min(n);
        let mut labels = Vec::new();
        for j in 0..=n.min(max_exc) {
            labels.push(CollectiveLabel::E(j));
        }
        for j in 0..n {
            if j + 1 <= max_exc {
                labels.push(CollectiveLabel::ER(j));
            }
        }
        let mut v: Matrix = Array2::zeros((self.dim(), labels.len()));
        for (col, label) in labels.iter().enumerate() {
            let (ne, nr) = match *label {
                CollectiveLabel::E(j) => (j, 0),
                CollectiveLabel::ER(j) => (j, 1),
            };
            let rows: Vec<usize> = (0..self.dim())
                .filter(|&i| self.count(i, AtomLevel::E) == ne && self.count(i, AtomLevel::R) == nr)
                .collect();
            let amp = C64::from(1.0 / (rows.len() as f64).sqrt());
            for r in rows {
                v[[r, col]] = amp;
            }
        }
        SymmetricEmbedding {
            labels,
            isometry: v,
            space: self.space.clone(),
        }
    }
}

/// Isometry `V` whose columns are symmetric collective states written in a
/// microscopic basis.
#[derive(Debug, Clone)]
pub struct SymmetricEmbedding {
    labels: Vec<CollectiveLabel>,
    isometry: Matrix,
    space: SpaceSpec,
}

impl SymmetricEmbedding {
    pub fn labels(&self) -> &[CollectiveLabel] {
        &self.labels
    }

    pub fn isometry(&self) -> &Matrix {
        &self.isometry
    }

    pub fn column(&self, label: CollectiveLabel) -> Option<ndarray::ArrayView1<'_, C64>> {
        let k = self.labels.iter().position(|&l| l == label)?;
        Some(self.isometry.column(k))
    }

    /// Projector `V V†` onto the symmetric subspace.
    pub fn projector(&self) -> Operator {
        let p = self.isometry.dot(&dagger(&self.isometry));
        Operator::new(self.space.clone(), p).expect("square by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::collective::{collective_lowering, CollectiveBasis, LadderBranch};
    use crate::linalg::{identity, max_abs};
    use crate::Vector;

    fn brute_count(n: usize, blockade: bool) -> usize {
        (0..3usize.pow(n as u32))
            .filter(|c| {
                let mut c = *c;
                let mut r = 0;
                for _ in 0..n {
                    r += (c % 3 == 2) as usize;
                    c /= 3;
                }
                !blockade || r <= 1
            })
            .count()
    }

    #[test]
    fn dimensions_match_enumeration() {
        for n in 1..=9 {
            let b = microscopic_basis(n, true, None, "at").unwrap();
            assert_eq!(b.dim(), brute_count(n, true));
            assert_eq!(b.dim(), (1 << n) + n * (1 << (n - 1)));
        }
        assert_eq!(microscopic_basis(2, true, None, "at").unwrap().dim(), 8);
        assert_eq!(microscopic_basis(9, true, None, "at").unwrap().dim(), 2816);
        assert_eq!(microscopic_basis(1, true, None, "at").unwrap().dim(), 3);
        assert_eq!(microscopic_basis(3, false, None, "at").unwrap().dim(), 27);
    }

    #[test]
    fn truncated_dimension() {
        // ≤2 non-ground atoms out of 9: 1 + 9·2 + 36·3
        let b = microscopic_basis(9, true, Some(2), "at").unwrap();
        assert_eq!(b.dim(), 127);
    }

    #[test]
    fn cap_exceeded_is_resource_error() {
        let r = microscopic_basis(30, true, None, "at");
        assert!(matches!(r, Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn ordering_is_base3_ascending() {
        let b = microscopic_basis(3, true, None, "at").unwrap();
        let code = |s: &[AtomLevel]| s.iter().fold(0usize, |a, &l| a * 3 + l as usize);
        for i in 1..b.dim() {
            assert!(code(b.state(i - 1)) < code(b.state(i)));
        }
    }

    /// Unnormalized `(Σσ_eg)^j (Σσ_rg)^r |G⟩` built by repeated application.
    fn raised(b: &MicroscopicBasis, j: usize, with_r: bool) -> Vector {
        let mut v = Vector::zeros(b.dim());
        v[b.index_of(&vec![AtomLevel::G; b.n_atoms()]).unwrap()] = C64::from(1.0);
        if with_r {
            v = b.collective_transition(AtomLevel::R, AtomLevel::G).to_dense().dot(&v);
        }
        let up = b.collective_transition(AtomLevel::E, AtomLevel::G);
        for _ in 0..j {
            v = up.to_dense().dot(&v);
        }
        v
    }

    #[test]
    fn normalizations_match_brute_force() {
        for n in 1..=6 {
            let b = microscopic_basis(n, true, None, "at").unwrap();
            let c = CollectiveBasis::new(n, "c").unwrap();
            for j in 0..=n {
                let norm2: f64 = raised(&b, j, false).iter().map(|z| z.norm_sqr()).sum();
                assert!((norm2.ln() - c.ln_norm_e(j)).abs() < 1e-12);
            }
            for j in 0..n {
                let norm2: f64 = raised(&b, j, true).iter().map(|z| z.norm_sqr()).sum();
                assert!((norm2.ln() - c.ln_norm_r(j)).abs() < 1e-12, "N={n} j={j}");
            }
        }
    }

    #[test]
    fn printed_rydberg_normalization_only_holds_without_excitation() {
        // N·N!·j!/(N−j)! agrees with the brute-force norm of |E^jR⟩ only at j = 0.
        let n = 4;
        let c = CollectiveBasis::new(n, "c").unwrap();
        for j in 0..n {
            let printed = (n as f64).ln() + c.ln_norm_e(j);
            let agree = (printed - c.ln_norm_r(j)).abs() < 1e-12;
            assert_eq!(agree, j == 0, "j={j}");
        }
    }

    #[test]
    fn embedding_is_isometry() {
        for n in 1..=6 {
            let b = microscopic_basis(n, true, None, "at").unwrap();
            let emb = b.symmetric_embedding();
            assert_eq!(emb.labels().len(), 2 * n + 1);
            let v = emb.isometry();
            let vtv = dagger(v).dot(v);
            assert!(max_abs(&(vtv - identity(2 * n + 1))) < 1e-12);
        }
    }

    fn embedded_ladder(b: &MicroscopicBasis, op: &Operator) -> Matrix {
        let v = b.symmetric_embedding().isometry().clone();
        dagger(&v).dot(&op.to_dense()).dot(&v)
    }

    #[test]
    fn collective_ladders_match_microscopic_oracle() {
        for n in 1..=6 {
            let b = microscopic_basis(n, true, None, "at").unwrap();
            let c = CollectiveBasis::new(n, "c").unwrap();
            let pairs = [
                (AtomLevel::G, AtomLevel::E, LadderBranch::CavityNoR),
                (AtomLevel::R, AtomLevel::E, LadderBranch::Laser),
            ];
            for (to, from, branch) in pairs {
                let micro = embedded_ladder(&b, &b.collective_transition(to, from));
                let coll = collective_lowering(&c, branch);
                // the g←e lowering acts on both branches at once
                let mut expect = coll.to_dense();
                if branch == LadderBranch::CavityNoR {
                    expect = expect + &collective_lowering(&c, LadderBranch::CavityWithR).to_dense();
                }
                assert!(max_abs(&(micro - expect)) < 1e-12, "N={n} {branch:?}");
            }
        }
    }

    #[test]
    fn nine_atom_single_excitation_element() {
        let b = microscopic_basis(9, true, Some(1), "at").unwrap();
        let m = embedded_ladder(&b, &b.collective_transition(AtomLevel::G, AtomLevel::E));
        assert!((m[[0, 1]].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn truncated_embedding_drops_unreachable_labels() {
        let b = microscopic_basis(5, true, Some(2), "at").unwrap();
        let emb = b.symmetric_embedding();
        assert!(emb.column(CollectiveLabel::E(2)).is_some());
        assert!(emb.column(CollectiveLabel::E(3)).is_none());
        assert!(emb.column(CollectiveLabel::ER(1)).is_some());
        assert!(emb.column(CollectiveLabel::ER(2)).is_none());
    }
}
