//! End-to-end checks of the rank-0 diagram machinery over the reference
//! models: validation, boundary labels, y-annulus classification, surgery,
//! 0-bonds, and certificate compilation.

use std::sync::OnceLock;

use num_bigint::BigUint;

use grouptower::diagrams::{
    self, band_ring, band_strip, circle_diagram, diagram_from_certificate, square_diagram,
    AnnulusClass, Dart, Diagram,
};
use grouptower::derivation::derive_power_relation;
use grouptower::finite_models::{AuxiliaryModels, FiniteGroup, QGroup};
use grouptower::hnn::{build_g_model, HnnData};
use grouptower::presentation::{build_tower, Presentation, TowerLevel};
use grouptower::words::Word;

struct Setup {
    aux: AuxiliaryModels,
    g: HnnData<QGroup>,
    level: TowerLevel,
}

fn setup() -> &'static Setup {
    static SETUP: OnceLock<Setup> = OnceLock::new();
    SETUP.get_or_init(|| {
        let aux = AuxiliaryModels::reference(2, 3).unwrap();
        let g = build_g_model(&aux).unwrap();
        let level = build_tower(&Presentation::free(2), &BigUint::from(3u32), 1)
            .unwrap()
            .remove(1);
        Setup { aux, g, level }
    })
}

fn q_c(s: &Setup) -> <QGroup as FiniteGroup>::Elem {
    s.g.parse_word("[c]").unwrap().head
}

fn q_b1(s: &Setup) -> <QGroup as FiniteGroup>::Elem {
    s.g.parse_word("[b1]").unwrap().head
}

fn assert_valid(d: &Diagram, g: &HnnData<QGroup>, what: &str) {
    let report = diagrams::validate(d, g);
    assert!(
        report.is_valid(),
        "{what} should validate, found: {:?}",
        report.violations
    );
}

#[test]
fn square_and_circle_validate() {
    let s = setup();
    let sq_c = square_diagram(q_c(s), &s.g).unwrap();
    assert_valid(&sq_c, &s.g, "square with side c");
    let sq_b = square_diagram(q_b1(s), &s.g).unwrap();
    assert_valid(&sq_b, &s.g, "square with side b1");

    let c = q_c(s);
    let circle = circle_diagram(&[c, c, c]).unwrap();
    assert_valid(&circle, &s.g, "0-circle (c, c, c)");

    // A square whose fourth side ignores the embedding must be rejected.
    let mut broken = sq_c.clone();
    broken.labels[3] = diagrams::EdgeLabel::Base(s.g.base.inv(&q_c(s)));
    let report = diagrams::validate(&broken, &s.g);
    // The side c has κ(c) = c, so c⁻¹ is actually correct; break it harder.
    let mut broken2 = square_diagram(q_b1(s), &s.g).unwrap();
    broken2.labels[3] = diagrams::EdgeLabel::Base(s.g.base.inv(&q_b1(s)));
    let report2 = diagrams::validate(&broken2, &s.g);
    assert!(report.is_valid());
    assert!(!report2.is_valid());
}

#[test]
fn boundary_labels_read_off_correctly() {
    let s = setup();
    let sq = square_diagram(q_b1(s), &s.g).unwrap();
    let label = diagrams::boundary_label(&sq, 0, &s.g).unwrap();
    let expected = s.g.parse_word("y [b1] y^-1 [a1^-1 b1^-1]").unwrap();
    assert_eq!(label, expected);
    assert!(s.g.is_trivial(&label));

    let empty = Diagram::single_vertex();
    assert_valid(&empty, &s.g, "single vertex");
    let label = diagrams::boundary_label(&empty, 0, &s.g).unwrap();
    assert_eq!(label.y_length(), 0);
    assert_eq!(label.head, s.g.base.identity());

    // Two squares glued along a y-edge: y-length 2 boundary, trivial in 𝒢.
    let c = q_c(s);
    let strip = band_strip(&[c, c], &s.g).unwrap();
    assert_valid(&strip, &s.g, "strip of two squares");
    let label = diagrams::boundary_label(&strip, 0, &s.g).unwrap();
    assert_eq!(label.y_length(), 2);
    assert!(s.g.is_trivial(&label));
}

#[test]
fn path_measures_count_y_edges() {
    let s = setup();
    let sq = square_diagram(q_b1(s), &s.g).unwrap();
    let m = diagrams::measure_path(&sq, &sq.boundaries[0]);
    assert_eq!(m.strict_length, 4);
    assert_eq!(m.y_length, 2);
    assert!(m.y_length <= m.strict_length);
}

#[test]
fn boundary_y_length_is_even() {
    let s = setup();
    let c = q_c(s);
    for d in [
        square_diagram(q_b1(s), &s.g).unwrap(),
        band_strip(&[c, c, c], &s.g).unwrap(),
        band_ring(&[c, c, c], true, &s.g).unwrap(),
    ] {
        for cycle in 0..d.boundaries.len() {
            let label = diagrams::boundary_label(&d, cycle, &s.g).unwrap();
            assert_eq!(label.y_length() % 2, 0);
        }
    }
}

#[test]
fn ring_with_trivial_core_is_reducible() {
    let s = setup();
    let c = q_c(s);
    let d = band_ring(&[c, c, c], true, &s.g).unwrap();
    assert_valid(&d, &s.g, "ring of three squares around a c-circle");
    let annuli = diagrams::find_y_annuli(&d, &s.g).unwrap();
    assert_eq!(annuli.len(), 1);
    let annulus = &annuli[0];
    assert_eq!(annulus.squares.len(), 3);
    assert_eq!(annulus.class, AnnulusClass::Reducible);
    assert_eq!(annulus.bounded_faces.len(), 1);

    let before = diagrams::boundary_label(&d, 0, &s.g).unwrap();
    let reduced = diagrams::remove_reducible_annulus(&d, annulus, &s.g).unwrap();
    assert_valid(&reduced, &s.g, "ring after surgery");
    assert_eq!(reduced.squares().count(), 0);
    let after = diagrams::boundary_label(&reduced, 0, &s.g).unwrap();
    // Boundary label unchanged as an element of 𝒢.
    let diff = s.g.multiply(&after, &s.g.invert(&before));
    assert!(s.g.is_trivial(&diff));
    // No annuli remain.
    assert!(diagrams::find_y_annuli(&reduced, &s.g).unwrap().is_empty());
}

#[test]
fn open_bands_and_squareless_diagrams_have_no_annuli() {
    let s = setup();
    let c = q_c(s);
    let strip = band_strip(&[c, c], &s.g).unwrap();
    assert!(diagrams::find_y_annuli(&strip, &s.g).unwrap().is_empty());
    let circle = circle_diagram(&[c, c, c]).unwrap();
    assert!(diagrams::find_y_annuli(&circle, &s.g).unwrap().is_empty());
}

#[test]
fn annular_band_is_noncontractible() {
    let s = setup();
    let c = q_c(s);
    let d = band_ring(&[c, c, c], false, &s.g).unwrap();
    assert_valid(&d, &s.g, "annular band");
    let annuli = diagrams::find_y_annuli(&d, &s.g).unwrap();
    assert_eq!(annuli.len(), 1);
    assert_eq!(annuli[0].class, AnnulusClass::Noncontractible);
    assert!(diagrams::remove_reducible_annulus(&d, &annuli[0], &s.g).is_err());
}

#[test]
fn zero_bond_through_a_strip() {
    let s = setup();
    let c = q_c(s);
    let strip = band_strip(&[c, c], &s.g).unwrap();
    let boundary = &strip.boundaries[0];
    // Split the boundary into the section before the far y-edge and after.
    let far_y = boundary
        .iter()
        .position(|d| strip.is_y_edge(d.edge) && !d.rev)
        .unwrap();
    let q_section: Vec<Dart> = vec![boundary[far_y]];
    let p_section: Vec<Dart> = boundary
        .iter()
        .copied()
        .filter(|d| strip.is_y_edge(d.edge) && d.rev)
        .collect();
    let bond = diagrams::zero_bond(&strip, &p_section, &q_section).unwrap();
    assert_eq!(bond.squares.len(), 2);
    assert_eq!(bond.contour.len(), 2 + 2 * 2);
    // The contour is a closed walk.
    for (i, &dart) in bond.contour.iter().enumerate() {
        let next = bond.contour[(i + 1) % bond.contour.len()];
        assert_eq!(strip.dart_to(dart), strip.dart_from(next));
    }
    assert_eq!(bond.attach_p, p_section[0]);
    assert_eq!(bond.attach_q, q_section[0]);

    // Single square: smallest bond, contour of 4 edges.
    let single = band_strip(&[c], &s.g).unwrap();
    let boundary = &single.boundaries[0];
    let p: Vec<Dart> = boundary
        .iter()
        .copied()
        .filter(|d| single.is_y_edge(d.edge) && d.rev)
        .collect();
    let q: Vec<Dart> = boundary
        .iter()
        .copied()
        .filter(|d| single.is_y_edge(d.edge) && !d.rev)
        .collect();
    let bond = diagrams::zero_bond(&single, &p, &q).unwrap();
    assert_eq!(bond.squares.len(), 1);
    assert_eq!(bond.contour.len(), 4);

    // Sections with no connecting squares: error.
    let circle = circle_diagram(&[c, c, c]).unwrap();
    let darts = circle.boundaries[0].clone();
    assert!(diagrams::zero_bond(&circle, &darts[..1], &darts[1..]).is_err());
}

#[test]
fn certificate_diagrams_validate_with_the_right_boundary() {
    let s = setup();
    for text in ["a1.0", "a1.0 a2.0", "a1.0 a2.0^-1"] {
        let word = Word::parse(text).unwrap();
        let cert = derive_power_relation(&s.level, &word).unwrap();
        let d = diagram_from_certificate(&s.level, &cert, &s.aux, &s.g).unwrap();
        assert_valid(&d, &s.g, &format!("diagram for ({text})³"));
        let label = diagrams::boundary_label(&d, 0, &s.g).unwrap();
        assert_eq!(label.y_length(), 0);
        // The boundary must read the image of W³.
        let image = s
            .aux
            .eval_k(&[grouptower::words::Letter::a(1, 0), grouptower::words::Letter::a(2, 0)], &word.pow(3))
            .unwrap();
        let expected = s.aux.q.from_base(&s.aux.p.from_right(image));
        assert_eq!(label.head, expected);
        assert!(s.g.is_trivial(&label));
    }
}

#[test]
fn relator_certificates_become_single_cells() {
    let s = setup();
    let p = &s.level.presentation;
    // A base relator compiles to a one-cell diagram.
    let cert = grouptower::derivation::Certificate {
        presentation_digest: p.digest(),
        start: p.relators()[0].clone(),
        steps: vec![grouptower::derivation::Step::DeleteRelator {
            position: 0,
            relator: 0,
            sign: 1,
        }],
        end: Word::empty(),
    };
    let d = diagram_from_certificate(&s.level, &cert, &s.aux, &s.g).unwrap();
    assert_valid(&d, &s.g, "one-relator diagram");
    assert_eq!(d.faces.len(), 1);

    // The empty certificate compiles to the single-vertex diagram.
    let empty = grouptower::derivation::Certificate {
        presentation_digest: p.digest(),
        start: Word::empty(),
        steps: vec![],
        end: Word::empty(),
    };
    let d = diagram_from_certificate(&s.level, &empty, &s.aux, &s.g).unwrap();
    assert_eq!(d.n_vertices, 1);
    assert_eq!(d.n_edges(), 0);

    // A stable-letter relator (y b₁ y⁻¹ a₁⁻¹ b₁⁻¹) compiles with one square.
    let view = grouptower::presentation::ConstructionView::new(&s.level).unwrap();
    let idx = view.rel_conj_y(0);
    let cert = grouptower::derivation::Certificate {
        presentation_digest: p.digest(),
        start: p.relators()[idx].clone(),
        steps: vec![grouptower::derivation::Step::DeleteRelator {
            position: 0,
            relator: idx,
            sign: 1,
        }],
        end: Word::empty(),
    };
    let d = diagram_from_certificate(&s.level, &cert, &s.aux, &s.g).unwrap();
    assert_valid(&d, &s.g, "stable-letter relator diagram");
    assert_eq!(d.squares().count(), 1);
    let label = diagrams::boundary_label(&d, 0, &s.g).unwrap();
    assert_eq!(label.y_length(), 2);
    assert!(s.g.is_trivial(&label));
}

#[test]
fn validation_reports_broken_diagrams_by_face() {
    let s = setup();
    let c = q_c(s);

    // 0-circle whose labels do not multiply to 1.
    let mut bad_circle = circle_diagram(&[c, c, c]).unwrap();
    bad_circle.labels[0] = diagrams::EdgeLabel::Base(s.g.base.mul(&c, &c));
    let report = diagrams::validate(&bad_circle, &s.g);
    assert!(report
        .violations
        .iter()
        .any(|v| v.contains("face 0") && v.contains("multiply")));

    // A square whose y-edges point the same way.
    let mut bad_square = square_diagram(c, &s.g).unwrap();
    let flipped = bad_square.faces[0]
        .contour
        .iter()
        .map(|d| if bad_square.is_y_edge(d.edge) { d.reversed() } else { *d })
        .collect::<Vec<_>>();
    // Re-orienting only the contour also breaks walk closure; both kinds of
    // violation must be reported.
    bad_square.faces[0].contour = flipped;
    let report = diagrams::validate(&bad_square, &s.g);
    assert!(!report.is_valid());

    // A dart used twice.
    let mut doubled = circle_diagram(&[c, c, c]).unwrap();
    doubled.boundaries[0][2] = doubled.boundaries[0][0];
    let report = diagrams::validate(&doubled, &s.g);
    assert!(report.violations.iter().any(|v| v.contains("appears in both")));

    // Wrong Euler characteristic: an annulus claim over a disk layout.
    let mut wrong_topology = circle_diagram(&[c, c, c]).unwrap();
    wrong_topology.topology = diagrams::Topology::Annulus;
    let report = diagrams::validate(&wrong_topology, &s.g);
    assert!(report.violations.iter().any(|v| v.contains("Euler")));

    // A square side outside the associated subgroup: a₁ is not in ⟨b, c⟩,
    // so no valid square can carry it.
    assert!(square_diagram(s.g.parse_word("[a1]").unwrap().head, &s.g).is_err());
}

#[test]
fn diagram_text_round_trip() {
    let s = setup();
    let c = q_c(s);
    let diagrams_to_test = vec![
        square_diagram(q_b1(s), &s.g).unwrap(),
        circle_diagram(&[c, c, c]).unwrap(),
        band_ring(&[c, c, c], true, &s.g).unwrap(),
        band_ring(&[c, c], false, &s.g).unwrap(),
        Diagram::single_vertex(),
    ];
    for d in diagrams_to_test {
        let text = d.emit(&s.g);
        let parsed = Diagram::parse(&text, &s.g).unwrap();
        assert_eq!(parsed.emit(&s.g), text);
        let report = diagrams::validate(&parsed, &s.g);
        assert!(report.is_valid(), "round-tripped diagram: {:?}", report.violations);
    }
}
