//! Rank-0 van Kampen diagrams over the HNN presentation of 𝒢: planar maps
//! whose 2-cells are 0-squares (`y g y⁻¹ κ(g)⁻¹` contours) and 0-circles
//! (base-labeled contours multiplying to the identity of `Q`).
//!
//! Diagrams are stored as dart pairs with explicit face and boundary cycles,
//! so band-following, region splits and surgery are index manipulations.
//! Base edge labels are elements of the finite `Q` model, where equality is
//! decidable; `y`-edges carry the stable letter.

use std::collections::HashMap;

use thiserror::Error;

use crate::derivation::{self, Certificate};
use crate::finite_models::{AuxiliaryModels, FiniteGroup, QGroup};
use crate::hnn::{HnnData, QyWord};
use crate::presentation::TowerLevel;
use crate::words::Sign;

pub type QElem = <QGroup as FiniteGroup>::Elem;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Topology {
    Disk,
    Annulus,
}

/// Forward-dart label of an edge; the reverse dart carries the inverse.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeLabel {
    Y,
    Base(QElem),
}

/// A directed edge side: edge index plus direction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Dart {
    pub edge: u32,
    pub rev: bool,
}

impl Dart {
    pub fn fwd(edge: u32) -> Dart {
        Dart { edge, rev: false }
    }

    pub fn bwd(edge: u32) -> Dart {
        Dart { edge, rev: true }
    }

    pub fn reversed(self) -> Dart {
        Dart {
            edge: self.edge,
            rev: !self.rev,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FaceKind {
    Square,
    Circle,
}

#[derive(Clone, Debug)]
pub struct Face {
    pub kind: FaceKind,
    pub contour: Vec<Dart>,
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pub topology: Topology,
    pub n_vertices: usize,
    pub edge_from: Vec<u32>,
    pub edge_to: Vec<u32>,
    pub labels: Vec<EdgeLabel>,
    pub faces: Vec<Face>,
    pub boundaries: Vec<Vec<Dart>>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("diagram is invalid: {0}")]
    Invalid(String),
    #[error("boundary cycle index {0} out of range")]
    NoSuchBoundary(usize),
    #[error("annulus is not reducible")]
    NotReducible,
    #[error("no chain of 0-squares connects the two sections")]
    NoBond,
    #[error("certificate does not verify: {0}")]
    BadCertificate(String),
    #[error("cannot parse diagram at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Derivation(#[from] derivation::DerivationError),
    #[error(transparent)]
    Hnn(#[from] crate::hnn::HnnError),
    #[error(transparent)]
    View(#[from] crate::presentation::ViewError),
}

impl Diagram {
    pub fn single_vertex() -> Diagram {
        Diagram {
            topology: Topology::Disk,
            n_vertices: 1,
            edge_from: Vec::new(),
            edge_to: Vec::new(),
            labels: Vec::new(),
            faces: Vec::new(),
            boundaries: vec![Vec::new()],
        }
    }

    pub fn n_edges(&self) -> usize {
        self.edge_from.len()
    }

    pub fn dart_from(&self, d: Dart) -> u32 {
        if d.rev {
            self.edge_to[d.edge as usize]
        } else {
            self.edge_from[d.edge as usize]
        }
    }

    pub fn dart_to(&self, d: Dart) -> u32 {
        if d.rev {
            self.edge_from[d.edge as usize]
        } else {
            self.edge_to[d.edge as usize]
        }
    }

    pub fn is_y_edge(&self, edge: u32) -> bool {
        matches!(self.labels[edge as usize], EdgeLabel::Y)
    }

    /// `y`-sign of a dart on a y-edge: forward darts read `y`.
    pub fn y_sign(&self, d: Dart) -> Sign {
        if d.rev {
            -1
        } else {
            1
        }
    }

    /// Base value of a dart on a base edge.
    pub fn base_value(&self, d: Dart, q: &QGroup) -> Option<QElem> {
        match self.labels[d.edge as usize] {
            EdgeLabel::Y => None,
            EdgeLabel::Base(g) => Some(if d.rev { q.inv(&g) } else { g }),
        }
    }

    pub fn squares(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&f| self.faces[f].kind == FaceKind::Square)
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Rotates a square contour so it reads `(y, g, y⁻¹, h)`; `None` when the
/// y-darts are not two opposite edges with opposite signs.
fn square_orientation(d: &Diagram, contour: &[Dart]) -> Option<[Dart; 4]> {
    if contour.len() != 4 {
        return None;
    }
    for r in 0..4 {
        let c = [
            contour[r],
            contour[(r + 1) % 4],
            contour[(r + 2) % 4],
            contour[(r + 3) % 4],
        ];
        if d.is_y_edge(c[0].edge)
            && d.y_sign(c[0]) == 1
            && !d.is_y_edge(c[1].edge)
            && d.is_y_edge(c[2].edge)
            && d.y_sign(c[2]) == -1
            && !d.is_y_edge(c[3].edge)
        {
            return Some(c);
        }
    }
    None
}

/// Checks every face invariant against the `Q` model plus the structural
/// consistency of the dart complex; all violations are reported.
pub fn validate(d: &Diagram, g_model: &HnnData<QGroup>) -> ValidationReport {
    let mut violations: Vec<String> = Vec::new();
    let q = &g_model.base;
    let y = &g_model.letters[0];

    for e in 0..d.n_edges() {
        if d.edge_from[e] as usize >= d.n_vertices || d.edge_to[e] as usize >= d.n_vertices {
            violations.push(format!("edge {e} has an endpoint outside the vertex range"));
        }
    }

    let expected_boundaries = match d.topology {
        Topology::Disk => 1,
        Topology::Annulus => 2,
    };
    if d.boundaries.len() != expected_boundaries {
        violations.push(format!(
            "topology {:?} requires {expected_boundaries} boundary cycle(s), found {}",
            d.topology,
            d.boundaries.len()
        ));
    }

    // Every dart lies in exactly one face or boundary cycle, and every cycle
    // is a closed walk.
    let mut seen: HashMap<Dart, String> = HashMap::new();
    let cycles: Vec<(String, &Vec<Dart>)> = d
        .faces
        .iter()
        .enumerate()
        .map(|(f, face)| (format!("face {f}"), &face.contour))
        .chain(
            d.boundaries
                .iter()
                .enumerate()
                .map(|(b, cycle)| (format!("boundary {b}"), cycle)),
        )
        .collect();
    for (name, cycle) in &cycles {
        for (i, &dart) in cycle.iter().enumerate() {
            if dart.edge as usize >= d.n_edges() {
                violations.push(format!("{name} references missing edge {}", dart.edge));
                continue;
            }
            if let Some(owner) = seen.insert(dart, name.clone()) {
                violations.push(format!(
                    "dart {}{} appears in both {owner} and {name}",
                    dart.edge + 1,
                    if dart.rev { "^-1" } else { "" }
                ));
            }
            let next = cycle[(i + 1) % cycle.len()];
            if next.edge as usize >= d.n_edges() {
                continue;
            }
            if d.dart_to(dart) != d.dart_from(next) {
                violations.push(format!("{name} is not a closed walk at step {i}"));
            }
        }
    }
    let total_darts: usize = cycles.iter().map(|(_, c)| c.len()).sum();
    if total_darts != 2 * d.n_edges() {
        violations.push(format!(
            "dart count mismatch: {} cycle darts over {} edges",
            total_darts,
            d.n_edges()
        ));
    }

    // Euler characteristic: disk 1, annulus 0 (interior faces only).
    let euler = d.n_vertices as i64 - d.n_edges() as i64 + d.faces.len() as i64;
    let expected_euler = match d.topology {
        Topology::Disk => 1,
        Topology::Annulus => 0,
    };
    if euler != expected_euler {
        violations.push(format!(
            "Euler characteristic {euler}, expected {expected_euler} for {:?}",
            d.topology
        ));
    }

    // Face invariants against the model.
    for (f, face) in d.faces.iter().enumerate() {
        match face.kind {
            FaceKind::Square => match square_orientation(d, &face.contour) {
                Some(c) => {
                    let g = d.base_value(c[1], q).expect("checked base");
                    let h = d.base_value(c[3], q).expect("checked base");
                    if !y.in_domain(&g) {
                        violations.push(format!(
                            "face {f}: square side is not in the associated subgroup"
                        ));
                    } else {
                        let kappa_g = y.apply(&g).expect("checked membership");
                        if h != q.inv(kappa_g) {
                            violations.push(format!(
                                "face {f}: fourth side is not the inverse image of the second"
                            ));
                        }
                    }
                }
                None => violations.push(format!(
                    "face {f}: contour is not of the form y · g · y⁻¹ · h"
                )),
            },
            FaceKind::Circle => {
                if face.contour.len() < 2 {
                    violations.push(format!("face {f}: 0-circle needs at least 2 edges"));
                }
                let mut product = q.identity();
                let mut all_base = true;
                for &dart in &face.contour {
                    match d.base_value(dart, q) {
                        Some(v) => product = q.mul(&product, &v),
                        None => all_base = false,
                    }
                }
                if !all_base {
                    violations.push(format!("face {f}: 0-circle contains a y-edge"));
                } else if product != q.identity() {
                    violations.push(format!(
                        "face {f}: 0-circle boundary does not multiply to 1 in Q"
                    ));
                }
            }
        }
    }

    // Connectivity over edges.
    if d.n_vertices > 0 && d.n_edges() > 0 {
        let mut reached = vec![false; d.n_vertices];
        let mut stack = vec![d.edge_from[0] as usize];
        reached[d.edge_from[0] as usize] = true;
        while let Some(v) = stack.pop() {
            for e in 0..d.n_edges() {
                let (a, b) = (d.edge_from[e] as usize, d.edge_to[e] as usize);
                if a == v && !reached[b] {
                    reached[b] = true;
                    stack.push(b);
                }
                if b == v && !reached[a] {
                    reached[a] = true;
                    stack.push(a);
                }
            }
        }
        if !reached.iter().all(|&r| r) {
            violations.push("diagram is not connected".to_string());
        }
    }

    ValidationReport { violations }
}

/// Length measures of a path: the count of `y`-labeled edges and the total
/// edge count.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PathMeasure {
    pub y_length: usize,
    pub strict_length: usize,
}

pub fn measure_path(d: &Diagram, path: &[Dart]) -> PathMeasure {
    let y_length = path.iter().filter(|dart| d.is_y_edge(dart.edge)).count();
    PathMeasure {
        y_length,
        strict_length: path.len(),
    }
}

// ---------------------------------------------------------------------------
// Boundary labels
// ---------------------------------------------------------------------------

/// Reads a boundary cycle as an alternating word over the `Q` model.
pub fn boundary_label(
    d: &Diagram,
    cycle: usize,
    g_model: &HnnData<QGroup>,
) -> Result<QyWord<QElem>, DiagramError> {
    let darts = d
        .boundaries
        .get(cycle)
        .ok_or(DiagramError::NoSuchBoundary(cycle))?;
    let q = &g_model.base;
    let mut word = QyWord::from_base(q.identity());
    for &dart in darts {
        match d.labels[dart.edge as usize] {
            EdgeLabel::Y => word.tail.push((0, d.y_sign(dart), q.identity())),
            EdgeLabel::Base(_) => {
                let v = d.base_value(dart, q).expect("base edge");
                if let Some(last) = word.tail.last_mut() {
                    last.2 = q.mul(&last.2, &v);
                } else {
                    word.head = q.mul(&word.head, &v);
                }
            }
        }
    }
    Ok(word)
}

// ---------------------------------------------------------------------------
// y-annuli
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AnnulusClass {
    Contractible,
    Reducible,
    Noncontractible,
}

/// A closed band of 0-squares chained through shared y-edges.
#[derive(Clone, Debug)]
pub struct YAnnulus {
    pub squares: Vec<usize>,
    pub class: AnnulusClass,
    /// Base darts of the band facing the bounded region (when contractible).
    pub inner_seam: Vec<Dart>,
    /// Base darts facing the kept region.
    pub outer_seam: Vec<Dart>,
    /// Faces strictly inside the band (the subdiagram it bounds).
    pub bounded_faces: Vec<usize>,
}

/// Owner of each dart: face index, or boundary pseudo-face.
fn dart_owners(d: &Diagram) -> HashMap<Dart, usize> {
    let mut owners = HashMap::new();
    for (f, face) in d.faces.iter().enumerate() {
        for &dart in &face.contour {
            owners.insert(dart, f);
        }
    }
    for (b, cycle) in d.boundaries.iter().enumerate() {
        for &dart in cycle {
            owners.insert(dart, d.faces.len() + b);
        }
    }
    owners
}

/// All maximal closed bands of 0-squares, classified.
pub fn find_y_annuli(d: &Diagram, g_model: &HnnData<QGroup>) -> Result<Vec<YAnnulus>, DiagramError> {
    let owners = dart_owners(d);
    let q = &g_model.base;
    let mut visited = vec![false; d.faces.len()];
    let mut annuli = Vec::new();

    for start in d.squares() {
        if visited[start] {
            continue;
        }
        let oriented = square_orientation(d, &d.faces[start].contour)
            .ok_or_else(|| DiagramError::Invalid(format!("face {start} is not a 0-square")))?;
        // Walk the band in the direction of the square's y-exit.
        let mut squares = Vec::new();
        let mut entries = Vec::new();
        let mut face = start;
        let mut entry = oriented[0];
        let closed = loop {
            if visited[face] {
                break false;
            }
            visited[face] = true;
            squares.push(face);
            entries.push(entry);
            let c = square_orientation(d, &d.faces[face].contour).expect("square");
            // The two y-darts are c[0] and c[2]; leave through the other one.
            let exit = if c[0] == entry { c[2] } else { c[0] };
            match owners.get(&exit.reversed()) {
                Some(&owner)
                    if owner < d.faces.len() && d.faces[owner].kind == FaceKind::Square =>
                {
                    if owner == start && exit.reversed() == entries[0] {
                        break true;
                    }
                    if visited[owner] {
                        // Hit the interior of an already-walked band: open.
                        break false;
                    }
                    face = owner;
                    entry = exit.reversed();
                }
                _ => break false,
            }
        };
        if !closed {
            continue;
        }
        // Seams: with the contour rotated to (entry, s1, exit, s2) or
        // (exit, s1, entry, s2), collect the base darts consistently.
        let mut seam_a = Vec::new();
        let mut seam_b = Vec::new();
        for (&f, &entry) in squares.iter().zip(&entries) {
            let c = square_orientation(d, &d.faces[f].contour).expect("square");
            if c[0] == entry {
                seam_a.push(c[1]);
                seam_b.push(c[3]);
            } else {
                seam_a.push(c[3]);
                seam_b.push(c[1]);
            }
        }

        // Region analysis: components of faces and boundary pseudo-faces
        // linked through shared edges, not crossing the band squares.
        let n_nodes = d.faces.len() + d.boundaries.len();
        let mut parent: Vec<usize> = (0..n_nodes).collect();
        fn rep(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        let in_band = |f: usize| squares.contains(&f);
        for e in 0..d.n_edges() as u32 {
            let (Some(&o1), Some(&o2)) =
                (owners.get(&Dart::fwd(e)), owners.get(&Dart::bwd(e)))
            else {
                continue;
            };
            if o1 < d.faces.len() && in_band(o1) {
                continue;
            }
            if o2 < d.faces.len() && in_band(o2) {
                continue;
            }
            let (r1, r2) = (rep(&mut parent, o1), rep(&mut parent, o2));
            parent[r1] = r2;
        }
        let side_region = |seam: &[Dart], parent: &mut Vec<usize>| -> Option<usize> {
            for dart in seam {
                let owner = *owners.get(&dart.reversed())?;
                if owner < d.faces.len() && in_band(owner) {
                    continue;
                }
                return Some(rep(parent, owner));
            }
            None
        };
        let region_a = side_region(&seam_a, &mut parent);
        let region_b = side_region(&seam_b, &mut parent);
        let boundary_regions: Vec<usize> = (0..d.boundaries.len())
            .map(|b| rep(&mut parent, d.faces.len() + b))
            .collect();

        let noncontractible = d.topology == Topology::Annulus
            && boundary_regions.len() == 2
            && boundary_regions[0] != boundary_regions[1];
        let (class, inner_seam, outer_seam, bounded_faces) = if noncontractible {
            (AnnulusClass::Noncontractible, Vec::new(), Vec::new(), Vec::new())
        } else {
            // The bounded side is the one touching no diagram boundary.
            let touches_boundary = |region: Option<usize>| {
                region.is_some_and(|r| boundary_regions.contains(&r))
            };
            let (inner, outer, inner_region) = if !touches_boundary(region_a) {
                (seam_a.clone(), seam_b.clone(), region_a)
            } else if !touches_boundary(region_b) {
                (seam_b.clone(), seam_a.clone(), region_b)
            } else {
                // Both sides reach the boundary: contractible but nothing
                // bounded, so not reducible.
                (Vec::new(), Vec::new(), None)
            };
            if inner.is_empty() && outer.is_empty() {
                (AnnulusClass::Contractible, Vec::new(), Vec::new(), Vec::new())
            } else {
                let bounded: Vec<usize> = (0..d.faces.len())
                    .filter(|&f| {
                        !in_band(f)
                            && inner_region
                                .is_some_and(|r| rep(&mut parent, f) == r)
                    })
                    .collect();
                let mut product = q.identity();
                for dart in &inner {
                    product = q.mul(&product, &d.base_value(*dart, q).expect("base seam"));
                }
                if product == q.identity() {
                    (AnnulusClass::Reducible, inner, outer, bounded)
                } else {
                    (AnnulusClass::Contractible, inner, outer, bounded)
                }
            }
        };
        annuli.push(YAnnulus {
            squares,
            class,
            inner_seam,
            outer_seam,
            bounded_faces,
        });
    }
    Ok(annuli)
}

// ---------------------------------------------------------------------------
// Surgery
// ---------------------------------------------------------------------------

/// Cuts out a reducible y-annulus together with the subdiagram it bounds and
/// sews the hole with a single 0-circle along the kept seam. Boundary labels
/// are untouched; the new circle's label multiplies to 1 in `Q` because the
/// seam labels are κ-images of the removed trivial seam.
pub fn remove_reducible_annulus(
    d: &Diagram,
    annulus: &YAnnulus,
    g_model: &HnnData<QGroup>,
) -> Result<Diagram, DiagramError> {
    if annulus.class != AnnulusClass::Reducible {
        return Err(DiagramError::NotReducible);
    }
    let q = &g_model.base;
    let mut delete_faces = vec![false; d.faces.len()];
    for &f in annulus.squares.iter().chain(&annulus.bounded_faces) {
        delete_faces[f] = true;
    }
    let owners = dart_owners(d);
    let kept_owner = |dart: Dart| -> bool {
        match owners.get(&dart) {
            Some(&o) if o < d.faces.len() => !delete_faces[o],
            Some(_) => true, // boundary
            None => false,
        }
    };
    let mut keep_edge = vec![false; d.n_edges()];
    for e in 0..d.n_edges() as u32 {
        keep_edge[e as usize] = kept_owner(Dart::fwd(e)) || kept_owner(Dart::bwd(e));
    }

    // The freed darts along the kept seam become the new circle's contour.
    let freed: Vec<Dart> = annulus
        .outer_seam
        .iter()
        .copied()
        .filter(|dart| keep_edge[dart.edge as usize])
        .collect();
    if freed.is_empty() {
        return Err(DiagramError::Invalid(
            "reducible annulus has no kept seam to sew along".into(),
        ));
    }
    // Chain the freed darts into a closed walk.
    let mut by_from: HashMap<u32, Vec<Dart>> = HashMap::new();
    for &dart in &freed {
        by_from.entry(d.dart_from(dart)).or_default().push(dart);
    }
    let mut contour = vec![freed[0]];
    while contour.len() < freed.len() {
        let at = d.dart_to(*contour.last().unwrap());
        let candidates = by_from.get_mut(&at).ok_or_else(|| {
            DiagramError::Invalid("kept seam does not close up".into())
        })?;
        let next = candidates
            .iter()
            .position(|c| !contour.contains(c))
            .ok_or_else(|| DiagramError::Invalid("kept seam does not close up".into()))?;
        contour.push(candidates.remove(next));
    }
    if d.dart_to(*contour.last().unwrap()) != d.dart_from(contour[0]) {
        return Err(DiagramError::Invalid("kept seam is not a closed walk".into()));
    }

    let mut out = Diagram {
        topology: d.topology,
        n_vertices: 0,
        edge_from: Vec::new(),
        edge_to: Vec::new(),
        labels: Vec::new(),
        faces: Vec::new(),
        boundaries: Vec::new(),
    };

    // Renumber kept edges and vertices.
    let mut edge_map = vec![u32::MAX; d.n_edges()];
    let mut vertex_map = vec![u32::MAX; d.n_vertices];
    let map_vertex = |v: u32, out: &mut Diagram, vm: &mut Vec<u32>| -> u32 {
        if vm[v as usize] == u32::MAX {
            vm[v as usize] = out.n_vertices as u32;
            out.n_vertices += 1;
        }
        vm[v as usize]
    };
    for e in 0..d.n_edges() {
        if keep_edge[e] {
            edge_map[e] = out.edge_from.len() as u32;
            let from = map_vertex(d.edge_from[e], &mut out, &mut vertex_map);
            let to = map_vertex(d.edge_to[e], &mut out, &mut vertex_map);
            out.edge_from.push(from);
            out.edge_to.push(to);
            out.labels.push(d.labels[e]);
        }
    }
    let map_dart = |dart: Dart| Dart {
        edge: edge_map[dart.edge as usize],
        rev: dart.rev,
    };
    for (f, face) in d.faces.iter().enumerate() {
        if !delete_faces[f] {
            out.faces.push(Face {
                kind: face.kind,
                contour: face.contour.iter().copied().map(map_dart).collect(),
            });
        }
    }
    for cycle in &d.boundaries {
        out.boundaries
            .push(cycle.iter().copied().map(map_dart).collect());
    }

    // Sew: one 0-circle along the freed seam (padded with a spur if the
    // seam is a single loop edge, since 0-circles need two edges).
    let mut new_contour: Vec<Dart> = contour.iter().copied().map(map_dart).collect();
    if new_contour.len() == 1 {
        let anchor = out.dart_to(new_contour[0]);
        let fresh = out.n_vertices as u32;
        out.n_vertices += 1;
        let spur = out.edge_from.len() as u32;
        out.edge_from.push(anchor);
        out.edge_to.push(fresh);
        out.labels.push(EdgeLabel::Base(q.identity()));
        new_contour.push(Dart::fwd(spur));
        new_contour.push(Dart::bwd(spur));
    }
    out.faces.push(Face {
        kind: FaceKind::Circle,
        contour: new_contour,
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// 0-bonds
// ---------------------------------------------------------------------------

/// A chain of 0-squares connecting a y-edge of one boundary section to a
/// y-edge of another, with its standard contour.
#[derive(Clone, Debug)]
pub struct ZeroBond {
    pub squares: Vec<usize>,
    pub contour: Vec<Dart>,
    /// The distinguished edge on the first section.
    pub attach_p: Dart,
    /// The distinguished edge on the second section.
    pub attach_q: Dart,
}

/// Finds a 0-bond between the boundary sections `p` and `q`: a chain
/// `S₁ … S_k` with the entry y-edge reversed on `p` and the exit y-edge
/// reversed on `q`. The standard contour is
/// `e₁⁻¹ (f₁,₁⁻¹ … f₁,k⁻¹) e₂⁻¹ (f₂,k⁻¹ … f₂,₁⁻¹)`.
pub fn zero_bond(d: &Diagram, p: &[Dart], q: &[Dart]) -> Result<ZeroBond, DiagramError> {
    let owners = dart_owners(d);
    for &p_dart in p {
        if !d.is_y_edge(p_dart.edge) {
            continue;
        }
        let entry = p_dart.reversed();
        let Some(&owner) = owners.get(&entry) else {
            continue;
        };
        if owner >= d.faces.len() || d.faces[owner].kind != FaceKind::Square {
            continue;
        }
        let mut squares = Vec::new();
        let mut f1 = Vec::new();
        let mut f2 = Vec::new();
        let mut face = owner;
        let mut enter = entry;
        loop {
            if squares.contains(&face) {
                break;
            }
            squares.push(face);
            let c = square_orientation(d, &d.faces[face].contour).expect("square face");
            // ∂S = f₁ e₁ f₂ e₂ with e₁ the entry: rotate accordingly.
            let (s_f1, exit, s_f2) = if c[0] == enter {
                (c[3], c[2], c[1])
            } else {
                (c[1], c[0], c[3])
            };
            f1.push(s_f1);
            f2.push(s_f2);
            if q.contains(&exit.reversed()) {
                // Standard contour.
                let mut contour = vec![entry.reversed()];
                contour.extend(f1.iter().map(|dart| dart.reversed()));
                contour.push(exit.reversed());
                contour.extend(f2.iter().rev().map(|dart| dart.reversed()));
                return Ok(ZeroBond {
                    squares,
                    contour,
                    attach_p: entry.reversed(),
                    attach_q: exit.reversed(),
                });
            }
            match owners.get(&exit.reversed()) {
                Some(&next)
                    if next < d.faces.len() && d.faces[next].kind == FaceKind::Square =>
                {
                    face = next;
                    enter = exit.reversed();
                }
                _ => break,
            }
        }
    }
    Err(DiagramError::NoBond)
}

// ---------------------------------------------------------------------------
// Certificates to diagrams
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum Atom {
    Y(Sign),
    Base(QElem),
}

struct Pinch {
    /// Atom index of the opening stable letter in the pre-pinch state.
    at: usize,
    /// Number of base atoms between the two stable letters.
    run_len: usize,
    sign: Sign,
    run_product: QElem,
    image: QElem,
}

/// Compiles a verifying certificate into a disk diagram with boundary label
/// equal to the certificate's start word.
///
/// The start word is mapped into the HNN model; un-doing its Britton
/// reduction glues one 0-square per pinch around a core 0-circle carrying
/// the final trivial base word.
pub fn diagram_from_certificate(
    level: &TowerLevel,
    cert: &Certificate,
    aux: &AuxiliaryModels,
    g_model: &HnnData<QGroup>,
) -> Result<Diagram, DiagramError> {
    let report = derivation::verify(&level.presentation, cert)?;
    if !report.accepted {
        return Err(DiagramError::BadCertificate(
            report.reason.unwrap_or_default(),
        ));
    }
    let q = &g_model.base;
    let y_letter = &g_model.letters[0];

    // Image of the start word as atoms, one per letter.
    let view = crate::presentation::ConstructionView::new(level)?;
    let mut atoms: Vec<Atom> = Vec::new();
    for &(letter, sign) in cert.start.letters() {
        if letter == view.y {
            atoms.push(Atom::Y(sign));
            continue;
        }
        let value: QElem = if letter == view.c {
            aux.q.from_base(&aux.p.from_left(aux.bc().gen(aux.arity)))
        } else if let Some(i) = view.b_letters.iter().position(|&b| b == letter) {
            aux.q.from_base(&aux.p.from_left(aux.bc().gen(i)))
        } else if let Some(i) = view.x_letters.iter().position(|&x| x == letter) {
            aux.q.from_actor(aux.x.gen(i))
        } else if let Some(i) = view.base_position(letter) {
            aux.q.from_base(&aux.p.from_right(aux.k().gen(i)))
        } else {
            return Err(DiagramError::Invalid(format!(
                "letter {letter} has no image in the reference model"
            )));
        };
        let value = if sign == 1 { value } else { q.inv(&value) };
        atoms.push(Atom::Base(value));
    }

    // Forward Britton reduction on atom states, recording each pinch.
    let mut states: Vec<Vec<Atom>> = vec![atoms];
    let mut pinches: Vec<Pinch> = Vec::new();
    loop {
        let state = states.last().unwrap();
        let Some(pinch) = find_pinch(state, q, y_letter) else {
            break;
        };
        let mut next: Vec<Atom> = Vec::new();
        next.extend_from_slice(&state[..pinch.at]);
        next.push(Atom::Base(pinch.image));
        next.extend_from_slice(&state[pinch.at + pinch.run_len + 2..]);
        states.push(next);
        pinches.push(pinch);
    }

    // The terminal state must be all-base with trivial product.
    let terminal = states.last().unwrap();
    let mut product = q.identity();
    for atom in terminal {
        match atom {
            Atom::Base(v) => product = q.mul(&product, v),
            Atom::Y(_) => {
                return Err(DiagramError::Invalid(
                    "image did not reduce to the base; certificate and model disagree".into(),
                ))
            }
        }
    }
    if product != q.identity() {
        return Err(DiagramError::Invalid(
            "boundary image is not trivial in the base model".into(),
        ));
    }

    // Core diagram for the terminal state.
    let mut d;
    let mut boundary: Vec<Dart>; // aligned with the atom state
    if terminal.is_empty() {
        d = Diagram::single_vertex();
        boundary = Vec::new();
    } else {
        let values: Vec<QElem> = terminal
            .iter()
            .map(|a| match a {
                Atom::Base(v) => *v,
                Atom::Y(_) => unreachable!(),
            })
            .collect();
        let t = values.len();
        d = Diagram {
            topology: Topology::Disk,
            n_vertices: t.max(2),
            edge_from: Vec::new(),
            edge_to: Vec::new(),
            labels: Vec::new(),
            faces: Vec::new(),
            boundaries: vec![Vec::new()],
        };
        if t == 1 {
            // Pad to a 2-gon; the single label is trivial in Q.
            d.edge_from = vec![0, 1];
            d.edge_to = vec![1, 0];
            d.labels = vec![EdgeLabel::Base(values[0]), EdgeLabel::Base(q.identity())];
            d.faces.push(Face {
                kind: FaceKind::Circle,
                contour: vec![Dart::bwd(1), Dart::bwd(0)],
            });
            boundary = vec![Dart::fwd(0), Dart::fwd(1)];
        } else {
            boundary = Vec::new();
            for (i, &v) in values.iter().enumerate() {
                d.edge_from.push(i as u32);
                d.edge_to.push(((i + 1) % t) as u32);
                d.labels.push(EdgeLabel::Base(v));
                boundary.push(Dart::fwd(i as u32));
            }
            let face: Vec<Dart> = (0..t as u32).rev().map(Dart::bwd).collect();
            d.faces.push(Face {
                kind: FaceKind::Circle,
                contour: face,
            });
        }
        d.boundaries[0] = boundary.clone();
    }

    // Un-pinch in reverse, gluing a 0-square per pinch.
    for (k, pinch) in pinches.iter().enumerate().rev() {
        let state = &states[k + 1];
        // Boundary darts are aligned 1:1 with state atoms, except that the
        // boundary may carry extra padding edges after the atoms.
        debug_assert!(boundary.len() >= state.len());
        let old = boundary[pinch.at];
        debug_assert_eq!(
            d.base_value(old, q),
            Some(pinch.image),
            "boundary alignment drifted"
        );
        let u = d.dart_from(old);
        let v = d.dart_to(old);
        let w1 = d.n_vertices as u32;
        let w2 = w1 + 1;
        d.n_vertices += 2;
        let g_edge = d.edge_from.len() as u32;
        d.edge_from.push(w1);
        d.edge_to.push(w2);
        d.labels.push(EdgeLabel::Base(pinch.run_product));
        let (replacement, square) = if pinch.sign == 1 {
            // y g y⁻¹ replaces κ(g): edges u→w1 (y) and v→w2 (y).
            let ey1 = g_edge + 1;
            d.edge_from.push(u);
            d.edge_to.push(w1);
            d.labels.push(EdgeLabel::Y);
            let ey2 = g_edge + 2;
            d.edge_from.push(v);
            d.edge_to.push(w2);
            d.labels.push(EdgeLabel::Y);
            (
                vec![Dart::fwd(ey1), Dart::fwd(g_edge), Dart::bwd(ey2)],
                vec![Dart::bwd(g_edge), Dart::bwd(ey1), old, Dart::fwd(ey2)],
            )
        } else {
            // y⁻¹ h y replaces κ⁻¹(h): edges w1→u (y) and w2→v (y).
            let ey1 = g_edge + 1;
            d.edge_from.push(w1);
            d.edge_to.push(u);
            d.labels.push(EdgeLabel::Y);
            let ey2 = g_edge + 2;
            d.edge_from.push(w2);
            d.edge_to.push(v);
            d.labels.push(EdgeLabel::Y);
            (
                vec![Dart::bwd(ey1), Dart::fwd(g_edge), Dart::fwd(ey2)],
                vec![Dart::fwd(ey1), old, Dart::bwd(ey2), Dart::bwd(g_edge)],
            )
        };
        d.faces.push(Face {
            kind: FaceKind::Square,
            contour: square,
        });
        boundary.splice(pinch.at..=pinch.at, replacement);
        d.boundaries[0] = boundary.clone();
    }

    Ok(d)
}

fn find_pinch(
    state: &[Atom],
    q: &QGroup,
    y_letter: &crate::hnn::StableLetter<QElem>,
) -> Option<Pinch> {
    let mut i = 0;
    while i < state.len() {
        let Atom::Y(sign) = state[i] else {
            i += 1;
            continue;
        };
        let mut product = q.identity();
        let mut j = i + 1;
        while j < state.len() {
            match &state[j] {
                Atom::Base(v) => {
                    product = q.mul(&product, v);
                    j += 1;
                }
                Atom::Y(next_sign) => {
                    if *next_sign == -sign {
                        let image = if sign == 1 {
                            y_letter.apply(&product).cloned()
                        } else {
                            y_letter.apply_inverse(&product).cloned()
                        };
                        if let Some(image) = image {
                            return Some(Pinch {
                                at: i,
                                run_len: j - i - 1,
                                sign,
                                run_product: product,
                                image,
                            });
                        }
                    }
                    break;
                }
            }
        }
        i += 1;
    }
    None
}

// ---------------------------------------------------------------------------
// Elementary diagrams
// ---------------------------------------------------------------------------

/// A single 0-square with second side `g ∈ A_y`.
pub fn square_diagram(g: QElem, g_model: &HnnData<QGroup>) -> Result<Diagram, DiagramError> {
    let q = &g_model.base;
    let kappa_g = g_model.letters[0]
        .apply(&g)
        .ok_or_else(|| DiagramError::Invalid("side is not in the associated subgroup".into()))?;
    Ok(Diagram {
        topology: Topology::Disk,
        n_vertices: 4,
        edge_from: vec![0, 1, 3, 3],
        edge_to: vec![1, 2, 2, 0],
        labels: vec![
            EdgeLabel::Y,
            EdgeLabel::Base(g),
            EdgeLabel::Y,
            EdgeLabel::Base(q.inv(kappa_g)),
        ],
        faces: vec![Face {
            kind: FaceKind::Square,
            contour: vec![Dart::bwd(3), Dart::fwd(2), Dart::bwd(1), Dart::bwd(0)],
        }],
        boundaries: vec![vec![Dart::fwd(0), Dart::fwd(1), Dart::bwd(2), Dart::fwd(3)]],
    })
}

/// A single 0-circle with the given side labels (product must be 1 in `Q`).
pub fn circle_diagram(labels: &[QElem]) -> Result<Diagram, DiagramError> {
    let t = labels.len();
    if t < 2 {
        return Err(DiagramError::Invalid("0-circles need at least 2 edges".into()));
    }
    let mut d = Diagram {
        topology: Topology::Disk,
        n_vertices: t,
        edge_from: (0..t as u32).collect(),
        edge_to: (0..t as u32).map(|i| (i + 1) % t as u32).collect(),
        labels: labels.iter().map(|&l| EdgeLabel::Base(l)).collect(),
        faces: Vec::new(),
        boundaries: Vec::new(),
    };
    d.faces.push(Face {
        kind: FaceKind::Circle,
        contour: (0..t as u32).rev().map(Dart::bwd).collect(),
    });
    d.boundaries.push((0..t as u32).map(Dart::fwd).collect());
    Ok(d)
}

/// An open band of `k` 0-squares whose inner side labels are `inner`
/// (each must lie in the image subgroup so the outer labels exist).
pub fn band_strip(inner: &[QElem], g_model: &HnnData<QGroup>) -> Result<Diagram, DiagramError> {
    let y = &g_model.letters[0];
    let k = inner.len();
    if k == 0 {
        return Err(DiagramError::Invalid("a band needs at least one square".into()));
    }
    let outer: Vec<QElem> = inner
        .iter()
        .map(|g| {
            y.apply_inverse(g)
                .copied()
                .ok_or_else(|| DiagramError::Invalid("band label outside the image subgroup".into()))
        })
        .collect::<Result<_, _>>()?;
    // Vertices: u_0 … u_k inner, then w_0 … w_k outer.
    let u = |i: usize| i as u32;
    let w = |i: usize| (k + 1 + i) as u32;
    let mut d = Diagram {
        topology: Topology::Disk,
        n_vertices: 2 * (k + 1),
        edge_from: Vec::new(),
        edge_to: Vec::new(),
        labels: Vec::new(),
        faces: Vec::new(),
        boundaries: Vec::new(),
    };
    // Edges: inner 0..k-1, y-edges k..2k, outer 2k+1..3k.
    for (i, &label) in inner.iter().enumerate() {
        d.edge_from.push(u(i));
        d.edge_to.push(u(i + 1));
        d.labels.push(EdgeLabel::Base(label));
    }
    for i in 0..=k {
        d.edge_from.push(u(i));
        d.edge_to.push(w(i));
        d.labels.push(EdgeLabel::Y);
    }
    for (i, &label) in outer.iter().enumerate() {
        d.edge_from.push(w(i));
        d.edge_to.push(w(i + 1));
        d.labels.push(EdgeLabel::Base(label));
    }
    let inner_e = |i: usize| i as u32;
    let y_e = |i: usize| (k + i) as u32;
    let outer_e = |i: usize| (2 * k + 1 + i) as u32;
    for i in 0..k {
        d.faces.push(Face {
            kind: FaceKind::Square,
            contour: vec![
                Dart::fwd(y_e(i)),
                Dart::fwd(outer_e(i)),
                Dart::bwd(y_e(i + 1)),
                Dart::bwd(inner_e(i)),
            ],
        });
    }
    let mut boundary = Vec::new();
    boundary.extend((0..k).map(|i| Dart::fwd(inner_e(i))));
    boundary.push(Dart::fwd(y_e(k)));
    boundary.extend((0..k).rev().map(|i| Dart::bwd(outer_e(i))));
    boundary.push(Dart::bwd(y_e(0)));
    d.boundaries.push(boundary);
    Ok(d)
}

/// A closed band of `k ≥ 2` 0-squares. With a core, the band rings a single
/// 0-circle carrying the inner labels (their product must be 1 in `Q`) and
/// the result is a disk; without, the inner seam is the second boundary of
/// an annulus.
pub fn band_ring(
    inner: &[QElem],
    with_core: bool,
    g_model: &HnnData<QGroup>,
) -> Result<Diagram, DiagramError> {
    let y = &g_model.letters[0];
    let k = inner.len();
    if k < 2 {
        return Err(DiagramError::Invalid("a closed band needs at least two squares".into()));
    }
    let outer: Vec<QElem> = inner
        .iter()
        .map(|g| {
            y.apply_inverse(g)
                .copied()
                .ok_or_else(|| DiagramError::Invalid("band label outside the image subgroup".into()))
        })
        .collect::<Result<_, _>>()?;
    let u = |i: usize| (i % k) as u32;
    let w = |i: usize| (k + i % k) as u32;
    let mut d = Diagram {
        topology: if with_core {
            Topology::Disk
        } else {
            Topology::Annulus
        },
        n_vertices: 2 * k,
        edge_from: Vec::new(),
        edge_to: Vec::new(),
        labels: Vec::new(),
        faces: Vec::new(),
        boundaries: Vec::new(),
    };
    for (i, &label) in inner.iter().enumerate() {
        d.edge_from.push(u(i));
        d.edge_to.push(u(i + 1));
        d.labels.push(EdgeLabel::Base(label));
    }
    for i in 0..k {
        d.edge_from.push(u(i));
        d.edge_to.push(w(i));
        d.labels.push(EdgeLabel::Y);
    }
    for (i, &label) in outer.iter().enumerate() {
        d.edge_from.push(w(i));
        d.edge_to.push(w(i + 1));
        d.labels.push(EdgeLabel::Base(label));
    }
    let inner_e = |i: usize| (i % k) as u32;
    let y_e = |i: usize| (k + i % k) as u32;
    let outer_e = |i: usize| (2 * k + i % k) as u32;
    for i in 0..k {
        d.faces.push(Face {
            kind: FaceKind::Square,
            contour: vec![
                Dart::fwd(y_e(i)),
                Dart::fwd(outer_e(i)),
                Dart::bwd(y_e(i + 1)),
                Dart::bwd(inner_e(i)),
            ],
        });
    }
    if with_core {
        d.faces.push(Face {
            kind: FaceKind::Circle,
            contour: (0..k).map(|i| Dart::fwd(inner_e(i))).collect(),
        });
    }
    d.boundaries
        .push((0..k).rev().map(|i| Dart::bwd(outer_e(i))).collect());
    if !with_core {
        d.boundaries
            .push((0..k).map(|i| Dart::fwd(inner_e(i))).collect());
    }
    Ok(d)
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

impl Diagram {
    /// Emits the structured text form: topology, vertex count, edges with
    /// labels, face cycles with types, boundary cycles. Base labels are
    /// spelled through the model's generator decomposition.
    pub fn emit(&self, g_model: &HnnData<QGroup>) -> String {
        let mut out = String::new();
        out.push_str(match self.topology {
            Topology::Disk => "topology disk\n",
            Topology::Annulus => "topology annulus\n",
        });
        out.push_str(&format!("vertices {}\n", self.n_vertices));
        for e in 0..self.n_edges() {
            let label = match self.labels[e] {
                EdgeLabel::Y => "y".to_string(),
                EdgeLabel::Base(v) => emit_base_label(&v, g_model),
            };
            out.push_str(&format!(
                "edge {} {} {} {label}\n",
                e + 1,
                self.edge_from[e],
                self.edge_to[e]
            ));
        }
        let emit_darts = |darts: &[Dart]| {
            darts
                .iter()
                .map(|d| {
                    if d.rev {
                        format!("{}^-1", d.edge + 1)
                    } else {
                        format!("{}", d.edge + 1)
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        for face in &self.faces {
            let kind = match face.kind {
                FaceKind::Square => "square",
                FaceKind::Circle => "circle",
            };
            out.push_str(&format!("face {kind} {}\n", emit_darts(&face.contour)));
        }
        for cycle in &self.boundaries {
            out.push_str(&format!("boundary {}\n", emit_darts(cycle)));
        }
        out
    }

    pub fn parse(text: &str, g_model: &HnnData<QGroup>) -> Result<Diagram, DiagramError> {
        let err = |line: usize, message: &str| DiagramError::Parse {
            line: line + 1,
            message: message.into(),
        };
        let mut topology = None;
        let mut n_vertices = 0usize;
        let mut edge_from = Vec::new();
        let mut edge_to = Vec::new();
        let mut labels = Vec::new();
        let mut faces = Vec::new();
        let mut boundaries = Vec::new();
        let parse_darts = |tokens: &[&str], line: usize| -> Result<Vec<Dart>, DiagramError> {
            tokens
                .iter()
                .map(|t| {
                    let (body, rev) = match t.strip_suffix("^-1") {
                        Some(b) => (b, true),
                        None => (*t, false),
                    };
                    let id: u32 = body
                        .parse()
                        .map_err(|_| err(line, &format!("bad dart reference `{t}`")))?;
                    if id == 0 {
                        return Err(err(line, "edge references are 1-based"));
                    }
                    Ok(Dart { edge: id - 1, rev })
                })
                .collect()
        };
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            match parts.next().unwrap() {
                "topology" => {
                    topology = match parts.next() {
                        Some("disk") => Some(Topology::Disk),
                        Some("annulus") => Some(Topology::Annulus),
                        _ => return Err(err(no, "expected `disk` or `annulus`")),
                    }
                }
                "vertices" => {
                    n_vertices = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| err(no, "bad vertex count"))?;
                }
                "edge" => {
                    let id: usize = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| err(no, "bad edge id"))?;
                    if id != edge_from.len() + 1 {
                        return Err(err(no, "edges must be numbered consecutively from 1"));
                    }
                    let from: u32 = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| err(no, "bad source vertex"))?;
                    let to: u32 = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| err(no, "bad target vertex"))?;
                    let rest: Vec<&str> = parts.collect();
                    let label_text = rest.join(" ");
                    let label = if label_text == "y" {
                        EdgeLabel::Y
                    } else if label_text.starts_with('[') && label_text.ends_with(']') {
                        let inner = &label_text[1..label_text.len() - 1];
                        let value = g_model
                            .eval_base_word(inner)
                            .map_err(|e| err(no, &e.to_string()))?;
                        EdgeLabel::Base(value)
                    } else {
                        return Err(err(no, "edge label must be `y` or `[gen word]`"));
                    };
                    edge_from.push(from);
                    edge_to.push(to);
                    labels.push(label);
                }
                "face" => {
                    let kind = match parts.next() {
                        Some("square") => FaceKind::Square,
                        Some("circle") => FaceKind::Circle,
                        _ => return Err(err(no, "expected `square` or `circle`")),
                    };
                    let tokens: Vec<&str> = parts.collect();
                    faces.push(Face {
                        kind,
                        contour: parse_darts(&tokens, no)?,
                    });
                }
                "boundary" => {
                    let tokens: Vec<&str> = parts.collect();
                    boundaries.push(parse_darts(&tokens, no)?);
                }
                other => return Err(err(no, &format!("unknown directive `{other}`"))),
            }
        }
        Ok(Diagram {
            topology: topology.ok_or_else(|| err(0, "missing topology line"))?,
            n_vertices,
            edge_from,
            edge_to,
            labels,
            faces,
            boundaries,
        })
    }
}

fn emit_base_label(v: &QElem, g_model: &HnnData<QGroup>) -> String {
    let q = &g_model.base;
    let tokens: Vec<String> = q
        .decompose(v)
        .into_iter()
        .map(|l| {
            let name = q.gen_name(l.unsigned_abs() as usize - 1);
            if l > 0 {
                name.to_string()
            } else {
                format!("{name}^-1")
            }
        })
        .collect();
    format!("[{}]", tokens.join(" "))
}
