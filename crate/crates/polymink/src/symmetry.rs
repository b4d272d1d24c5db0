//! Lattice symmetries of a polytope and their action on decomposition choices.
//!
//! An automorphism is a linear map in GL(ℤ) permuting the vertex set. The group is
//! found by a depth-first search over images of a fixed linearly independent base
//! of vertices, pruned by combinatorial invariants (facet/edge incidence counts,
//! incident edge lengths) and confirmed exactly: the solved matrix must be integral,
//! unimodular, and must permute the vertices.
//!
//! An automorphism acts on a decomposition choice face by face: it carries each
//! 2-face chart to the image face's chart through an (asserted unimodular) 2×2
//! transport, maps every summand profile along, and looks the transported
//! decomposition up in the image face's canonical option list. Orbits of choices
//! under this action de-duplicate the sweep.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::lattice::{linalg, IntVector};
use crate::minkowski::{Decomposition, DecompositionChoice, DecompositionSweep, SummandProfile};
use crate::polytope::{FaceLattice, LatticePolytope, PolarPair};

/// One lattice automorphism of a polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    /// Unimodular matrix acting on column vectors.
    pub matrix: Vec<Vec<BigInt>>,
    /// `vertex_perm[i]` is the index of the image of vertex i.
    pub vertex_perm: Vec<usize>,
}

impl Automorphism {
    /// Applies the linear map to a lattice vector.
    pub fn apply(&self, v: &IntVector) -> IntVector {
        IntVector(linalg::mat_vec(&self.matrix, &v.0))
    }

    pub fn is_identity(&self) -> bool {
        self.vertex_perm.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// Per-vertex invariant used to prune the search: anything an automorphism must
/// preserve and that is cheap to compute.
fn vertex_signatures(p: &LatticePolytope, faces: &FaceLattice) -> Vec<(usize, usize, Vec<BigInt>)> {
    let nv = p.vertices.len();
    let mut facet_count = vec![0usize; nv];
    for f in &faces.facet_data {
        for &i in &f.points {
            facet_count[i] += 1;
        }
    }
    let mut edge_count = vec![0usize; nv];
    let mut edge_lengths: Vec<Vec<BigInt>> = vec![Vec::new(); nv];
    for e in faces.of_dim(1) {
        let (a, b) = (e.vertices[0], e.vertices[1]);
        let len = crate::lattice::lattice_length(&p.vertices[a], &p.vertices[b]);
        edge_count[a] += 1;
        edge_count[b] += 1;
        edge_lengths[a].push(len.clone());
        edge_lengths[b].push(len);
    }
    (0..nv)
        .map(|i| {
            let mut lens = edge_lengths[i].clone();
            lens.sort();
            (facet_count[i], edge_count[i], lens)
        })
        .collect()
}

/// Computes the full lattice automorphism group, sorted by vertex permutation.
pub fn automorphism_group(p: &LatticePolytope) -> Result<Vec<Automorphism>> {
    let faces = FaceLattice::build(p)?;
    let sigs = vertex_signatures(p, &faces);
    let nv = p.vertices.len();

    // Edge lookup with lattice lengths, for pairwise pruning.
    let mut edge_of: std::collections::BTreeMap<(usize, usize), BigInt> =
        std::collections::BTreeMap::new();
    for e in faces.of_dim(1) {
        let (a, b) = (e.vertices[0], e.vertices[1]);
        let len = crate::lattice::lattice_length(&p.vertices[a], &p.vertices[b]);
        edge_of.insert((a.min(b), a.max(b)), len);
    }

    // A linearly independent base of vertices, chosen greedily in index order.
    let mut base: Vec<usize> = Vec::new();
    for i in 0..nv {
        let mut rows: Vec<Vec<BigInt>> =
            base.iter().map(|&b| p.vertices[b].0.clone()).collect();
        rows.push(p.vertices[i].0.clone());
        if linalg::rank_int(&rows) == rows.len() {
            base.push(i);
        }
        if base.len() == p.dim {
            break;
        }
    }
    crate::ensure_internal!(base.len() == p.dim, "vertices of {} do not span", p.name);

    // Column matrix of the base, inverted once.
    let b_cols: Vec<Vec<BigInt>> = (0..p.dim)
        .map(|r| base.iter().map(|&i| p.vertices[i].0[r].clone()).collect())
        .collect();
    let b_inv = linalg::inverse_rational(&b_cols)
        .ok_or_else(|| Error::internal("base vertices are singular"))?;

    let vertex_set: std::collections::BTreeSet<&IntVector> = p.vertices.iter().collect();
    let mut out: Vec<Automorphism> = Vec::new();
    let mut images = vec![usize::MAX; p.dim];
    dfs_images(
        p,
        &sigs,
        &edge_of,
        &base,
        &b_inv,
        &vertex_set,
        &mut images,
        0,
        &mut out,
    )?;
    out.sort_by(|a, b| a.vertex_perm.cmp(&b.vertex_perm));
    crate::ensure_internal!(
        out.iter().any(|a| a.is_identity()),
        "automorphism search lost the identity"
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_images(
    p: &LatticePolytope,
    sigs: &[(usize, usize, Vec<BigInt>)],
    edge_of: &std::collections::BTreeMap<(usize, usize), BigInt>,
    base: &[usize],
    b_inv: &[Vec<num_rational::BigRational>],
    vertex_set: &std::collections::BTreeSet<&IntVector>,
    images: &mut Vec<usize>,
    depth: usize,
    out: &mut Vec<Automorphism>,
) -> Result<()> {
    if depth == base.len() {
        // Solve M · base = images and verify it is a lattice automorphism.
        let t_cols: Vec<Vec<BigInt>> = (0..p.dim)
            .map(|r| images.iter().map(|&i| p.vertices[i].0[r].clone()).collect())
            .collect();
        let t_rat: Vec<Vec<num_rational::BigRational>> = t_cols
            .iter()
            .map(|row| row.iter().map(|x| num_rational::BigRational::from_integer(x.clone())).collect())
            .collect();
        let m_rat = linalg::mat_mul_rational(&t_rat, b_inv);
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(p.dim);
        for row in &m_rat {
            let mut irow = Vec::with_capacity(p.dim);
            for x in row {
                if !x.denom().is_one() {
                    return Ok(()); // not integral: not a lattice map
                }
                irow.push(x.numer().clone());
            }
            m.push(irow);
        }
        let det = linalg::det_int(&m);
        if !(det.is_one() || (-&det).is_one()) {
            return Ok(());
        }
        // The map must permute the vertex set.
        let mut perm = Vec::with_capacity(p.vertices.len());
        for v in &p.vertices {
            let img = IntVector(linalg::mat_vec(&m, &v.0));
            if !vertex_set.contains(&img) {
                return Ok(());
            }
            perm.push(p.vertices.binary_search(&img).expect("sorted vertices"));
        }
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            if seen[i] {
                return Ok(());
            }
            seen[i] = true;
        }
        out.push(Automorphism { matrix: m, vertex_perm: perm });
        return Ok(());
    }

    let b = base[depth];
    for cand in 0..p.vertices.len() {
        if sigs[cand] != sigs[b] {
            continue;
        }
        if images[..depth].contains(&cand) {
            continue;
        }
        // Pairwise consistency with already assigned base vertices.
        let mut ok = true;
        for d in 0..depth {
            let (x, y) = (base[d].min(b), base[d].max(b));
            let (u, v) = (images[d].min(cand), images[d].max(cand));
            if edge_of.get(&(x, y)) != edge_of.get(&(u, v)) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        // Images must stay linearly independent.
        let mut rows: Vec<Vec<BigInt>> =
            images[..depth].iter().map(|&i| p.vertices[i].0.clone()).collect();
        rows.push(p.vertices[cand].0.clone());
        if linalg::rank_int(&rows) != rows.len() {
            continue;
        }
        images[depth] = cand;
        dfs_images(p, sigs, edge_of, base, b_inv, vertex_set, images, depth + 1, out)?;
        images[depth] = usize::MAX;
    }
    Ok(())
}

/// How one automorphism permutes the faces of the sweep and relabels each face's
/// decomposition options.
#[derive(Clone, Debug)]
pub struct ChoiceAction {
    /// `face_perm[f]` is the index of the image face.
    pub face_perm: Vec<usize>,
    /// `option_map[f][i]` is the option index, at the image face, of the
    /// transported i-th option of face f.
    pub option_map: Vec<Vec<usize>>,
}

/// Builds the action of one automorphism on the decomposition sweep.
pub fn choice_action(
    pair: &PolarPair,
    sweep: &DecompositionSweep,
    auto: &Automorphism,
) -> Result<ChoiceAction> {
    let faces2 = pair.faces.of_dim(2);
    let nf = faces2.len();
    crate::ensure_internal!(nf == sweep.faces.len(), "sweep and face lattice disagree");

    // Face permutation via vertex masks.
    let mut face_perm = Vec::with_capacity(nf);
    for f in faces2 {
        let mut mask = 0u64;
        for &v in &f.vertices {
            mask |= 1u64 << auto.vertex_perm[v];
        }
        let img = faces2.iter().position(|g| g.mask == mask).ok_or_else(|| {
            Error::invalid("not-an-automorphism", "the map does not permute the 2-faces")
        })?;
        face_perm.push(img);
    }

    let mut option_map = Vec::with_capacity(nf);
    for f in 0..nf {
        let src = &sweep.faces[f];
        let dst = &sweep.faces[face_perm[f]];
        // 2×2 chart transport: images of the source chart basis in the image chart.
        let cols: Vec<IntVector> = src
            .basis
            .iter()
            .map(|b| dst.direction_to_chart(&auto.apply(b)))
            .collect::<Result<_>>()?;
        let det = &cols[0].0[0] * &cols[1].0[1] - &cols[0].0[1] * &cols[1].0[0];
        crate::ensure_internal!(
            det.is_one() || (-&det).is_one(),
            "face chart transport is not unimodular"
        );
        // Both charts read their polygons counterclockwise, so an
        // orientation-reversing transport must flip every edge direction to
        // land on the image summand's ccw profile.
        let flip = det.is_negative();
        let transport = |d: &IntVector| -> IntVector {
            let raw = IntVector(vec![
                &cols[0].0[0] * &d.0[0] + &cols[1].0[0] * &d.0[1],
                &cols[0].0[1] * &d.0[0] + &cols[1].0[1] * &d.0[1],
            ]);
            if flip {
                raw.neg()
            } else {
                raw
            }
        };
        let mut maps = Vec::with_capacity(sweep.options[f].len());
        for opt in &sweep.options[f] {
            let mut summands = Vec::with_capacity(opt.summands.len());
            for s in &opt.summands {
                let t = match s {
                    SummandProfile::Segment(d) => SummandProfile::segment(&transport(d))?,
                    SummandProfile::Triangle(t) => {
                        SummandProfile::triangle(&transport(&t[0]), &transport(&t[1]), &transport(&t[2]))?
                    }
                };
                summands.push(t);
            }
            summands.sort();
            let image = Decomposition { summands };
            let j = sweep.options[face_perm[f]]
                .binary_search(&image)
                .map_err(|_| Error::internal("transported decomposition is not an option"))?;
            maps.push(j);
        }
        option_map.push(maps);
    }
    Ok(ChoiceAction { face_perm, option_map })
}

/// Applies an action to a choice.
pub fn apply_choice(action: &ChoiceAction, choice: &DecompositionChoice) -> DecompositionChoice {
    let mut indices = vec![0usize; choice.indices.len()];
    for (f, &i) in choice.indices.iter().enumerate() {
        indices[action.face_perm[f]] = action.option_map[f][i];
    }
    DecompositionChoice { indices }
}

/// Serializes a choice back to its sweep index.
pub fn choice_index(sweep: &DecompositionSweep, choice: &DecompositionChoice) -> u64 {
    let mut idx = 0u64;
    for (f, &i) in choice.indices.iter().enumerate() {
        idx = idx * sweep.options[f].len() as u64 + i as u64;
    }
    idx
}

/// Hard cap on sweep sizes for full orbit enumeration.
const MAX_ORBIT_SWEEP: u64 = 1 << 22;

/// Partitions all decomposition choices into orbits under the given actions.
/// Orbits are sorted by their minimal choice index; each orbit lists its member
/// indices in increasing order.
pub fn choice_orbits(
    sweep: &DecompositionSweep,
    actions: &[ChoiceAction],
) -> Result<Vec<Vec<u64>>> {
    let total = sweep.total_u64()?;
    if total > MAX_ORBIT_SWEEP {
        return Err(Error::invalid(
            "too-complex",
            format!("orbit enumeration over {total} choices exceeds the supported size"),
        ));
    }
    let mut visited = vec![false; total as usize];
    let mut orbits = Vec::new();
    for start in 0..total {
        if visited[start as usize] {
            continue;
        }
        let mut orbit = vec![start];
        visited[start as usize] = true;
        let mut queue = vec![sweep.choice(start)?];
        while let Some(c) = queue.pop() {
            for action in actions {
                let img = apply_choice(action, &c);
                let idx = choice_index(sweep, &img);
                if !visited[idx as usize] {
                    visited[idx as usize] = true;
                    orbit.push(idx);
                    queue.push(img);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(orbits)
}
