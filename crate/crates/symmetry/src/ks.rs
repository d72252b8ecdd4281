//! The symmetries of the Kerckhoff–Storm polytope: named coordinate maps,
//! the labeling of positive facets by P, R, F, J, and the pairing maps.

use std::collections::HashSet;

use lorentz::LorentzMap;
use polytope::ks::{classify_facets, classify_vertices, FacetClass, FacetKind, Side};
use polytope::Analysis;

use crate::{LabelPerm, Symmetry, SymmetryError, SymmetryGroup};

pub const LETTERS: [char; 4] = ['P', 'R', 'F', 'J'];

fn coordinate_map(label: &str) -> Option<LorentzMap> {
    let m = match label {
        "a" => LorentzMap::diagonal(&[1, -1, -1, -1, -1]),
        "r" => LorentzMap::diagonal(&[1, 1, 1, -1, -1]),
        "l" => LorentzMap::signed_permutation(&[0, 2, 1, 3, 4], &[1; 5]),
        "m" => LorentzMap::signed_permutation(&[0, 1, 3, 2, 4], &[1; 5]),
        "n" => LorentzMap::signed_permutation(&[0, 1, 3, 2, 4], &[1, 1, -1, -1, 1]),
        _ => return None,
    };
    Some(m.expect("valid coordinate map"))
}

/// One of the coordinate symmetries `a, r, l, m, n`.
pub fn named_symmetry(a: &Analysis, label: &str) -> Result<Symmetry, SymmetryError> {
    classify_facets(a)?;
    let m = coordinate_map(label).ok_or_else(|| SymmetryError::UnknownName(label.to_string()))?;
    Ok(Symmetry::from_map(a.polytope(), m)?.with_label(label))
}

/// The facet classes together with the labels P, R, F, J: upper positive
/// facets in lexicographic order of their normals, and each lower positive
/// facet labeled like its image under `a`.
#[derive(Clone, Debug)]
pub struct KsFrame {
    pub classes: Vec<FacetClass>,
    pub upper: [usize; 4],
    pub lower: [usize; 4],
    pub upper_tetrahedral: usize,
    pub lower_tetrahedral: usize,
    a: Symmetry,
}

impl KsFrame {
    pub fn new(a: &Analysis, group: &SymmetryGroup) -> Result<KsFrame, SymmetryError> {
        let classes = classify_facets(a)?;
        let p = a.polytope();
        let pick = |kind, side| -> Vec<usize> {
            (0..p.facet_count()).filter(|&i| classes[i] == FacetClass { kind, side }).collect()
        };
        let mut up = pick(FacetKind::Positive, Side::Upper);
        up.sort_by(|&x, &y| p.normal(x).coords().cmp(p.normal(y).coords()));
        let upper: [usize; 4] = up.try_into().map_err(|_| SymmetryError::Labeling("expected 4 upper positive facets".into()))?;
        let anti = named_symmetry(a, "a")?;
        if !group.contains(&anti) {
            return Err(SymmetryError::Labeling("a is not a symmetry".into()));
        }
        let lower = upper.map(|x| anti.facet_image(x));
        let tu = pick(FacetKind::Tetrahedral, Side::Upper);
        let tl = pick(FacetKind::Tetrahedral, Side::Lower);
        if tu.len() != 1 || tl.len() != 1 || lower.iter().any(|&x| classes[x].side != Side::Lower) {
            return Err(SymmetryError::Labeling("unexpected facet classes".into()));
        }
        Ok(KsFrame { classes, upper, lower, upper_tetrahedral: tu[0], lower_tetrahedral: tl[0], a: anti })
    }

    /// `P`, `R`, `F` or `J` for positive facets.
    pub fn letter(&self, facet: usize) -> Option<char> {
        let k = self.upper.iter().position(|&x| x == facet).or_else(|| self.lower.iter().position(|&x| x == facet))?;
        Some(LETTERS[k])
    }

    pub fn upper_facet(&self, letter: char) -> Option<usize> {
        LETTERS.iter().position(|&c| c == letter).map(|k| self.upper[k])
    }

    pub fn lower_facet(&self, letter: char) -> Option<usize> {
        LETTERS.iter().position(|&c| c == letter).map(|k| self.lower[k])
    }

    pub fn antipodal(&self) -> &Symmetry {
        &self.a
    }

    /// Whether `s` maps the upper half-space to itself.
    pub fn preserves_sides(&self, s: &Symmetry) -> bool {
        s.facet_image(self.upper_tetrahedral) == self.upper_tetrahedral
    }

    /// The permutation `s` induces on the upper positive facets when it
    /// preserves sides, or on `a∘s` otherwise.
    pub fn letter_action(&self, s: &Symmetry) -> (bool, LabelPerm) {
        let flip = !self.preserves_sides(s);
        let t = if flip { self.a.compose(s) } else { s.clone() };
        let mut moves: Vec<(char, char)> = (0..4)
            .map(|k| (LETTERS[k], self.letter(t.facet_image(self.upper[k])).expect("positive facet")))
            .filter(|(x, y)| x != y)
            .collect();
        moves.sort_unstable();
        (flip, LabelPerm::from_moves(moves))
    }

    /// `phi_P`, `phi_R`, `phi_F`, `phi_J`, `g` or `i`.
    pub fn pairing_symmetry(&self, group: &SymmetryGroup, name: &str) -> Result<Symmetry, SymmetryError> {
        let (flip, cycles) = match name {
            "phi_P" => (true, "(JFR)"),
            "phi_R" => (true, "(PFJ)"),
            "phi_F" => (true, "(PRJ)"),
            "phi_J" => (true, "(PFR)"),
            "g" => (true, "(PF)(JR)"),
            "i" => (false, "(PR)(FJ)"),
            _ => return Err(SymmetryError::UnknownName(name.to_string())),
        };
        let perm = LabelPerm::from_cycles(cycles)?;
        Ok(permutation_to_symmetry(group, self, flip, &perm)?.with_label(name))
    }
}

/// The unique element `ε·π` with `ε ∈ {1, a}` and `π` side-preserving,
/// acting on the upper positive facets by the letter permutation `π`.
pub fn permutation_to_symmetry(
    group: &SymmetryGroup,
    frame: &KsFrame,
    flip: bool,
    perm: &LabelPerm,
) -> Result<Symmetry, SymmetryError> {
    if let Some(c) = perm.moved().find(|c| !LETTERS.contains(c)) {
        return Err(SymmetryError::Labeling(format!("letter {c} is not one of P, R, F, J")));
    }
    let matches: Vec<&Symmetry> = group
        .elements()
        .iter()
        .filter(|s| frame.preserves_sides(s))
        .filter(|s| {
            LETTERS
                .iter()
                .all(|&c| frame.letter(s.facet_image(frame.upper_facet(c).expect("letter"))) == Some(perm.apply(c)))
        })
        .collect();
    let base = match matches.as_slice() {
        [s] => (*s).clone(),
        [] => return Err(SymmetryError::Labeling(format!("no symmetry realizes {perm}"))),
        _ => return Err(SymmetryError::Labeling(format!("{} symmetries realize {perm}", matches.len()))),
    };
    Ok(if flip { frame.antipodal().compose(&base) } else { base })
}

/// Outcome of one structural check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub checks: Vec<Check>,
    pub facet_orbits: Vec<Vec<usize>>,
    pub vertex_orbit_sizes: Vec<usize>,
    pub orientation_preserving: usize,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn parity(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 0
}

/// Structure of `Sym(P)`: order 48 with central `a`, the side-preserving
/// subgroup acting as the full symmetric group on P, R, F, J, the
/// orientation-preserving subgroup of order 24 acting evenly, and
/// transitivity on facet and vertex classes.
pub fn structure_check_p(group: &SymmetryGroup, a: &Analysis) -> Result<StructureReport, SymmetryError> {
    let frame = KsFrame::new(a, group)?;
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: String| {
        checks.push(Check { name: name.to_string(), passed, detail });
    };
    check("order", group.order() == 48, format!("{}", group.order()));

    let anti = frame.antipodal();
    let noncentral = group.elements().iter().find(|s| !anti.compose(s).same_element(&s.compose(anti)));
    check("a central", noncentral.is_none(), noncentral.map_or(String::new(), |s| format!("{:?}", s.perm())));

    let positions = |s: &Symmetry| -> Vec<usize> {
        frame.upper.iter().map(|&x| frame.upper.iter().position(|&y| y == s.facet_image(x)).unwrap_or(usize::MAX)).collect()
    };
    let stabilizer: Vec<&Symmetry> = group.elements().iter().filter(|s| frame.preserves_sides(s)).collect();
    let actions: HashSet<Vec<usize>> = stabilizer.iter().map(|s| positions(s)).collect();
    let faithful = stabilizer.len() == 24 && actions.len() == 24 && actions.iter().all(|p| !p.contains(&usize::MAX));
    check(
        "side stabilizer acts as S4 on upper positive facets",
        faithful,
        format!("{} elements, {} distinct actions", stabilizer.len(), actions.len()),
    );

    let plus: Vec<&Symmetry> = group.elements().iter().filter(|s| s.det_sign() > 0).collect();
    check("orientation-preserving order", plus.len() == 24, format!("{}", plus.len()));
    let odd = plus.iter().filter(|s| frame.preserves_sides(s)).find(|s| !parity(&positions(s)));
    check(
        "orientation-preserving side stabilizer is even",
        odd.is_none(),
        odd.map_or(String::new(), |s| format!("{:?}", s.perm())),
    );

    let facet_orbits = group.facet_orbits();
    let by_kind = |orbit: &Vec<usize>| -> bool { orbit.iter().all(|&i| frame.classes[i].kind == frame.classes[orbit[0]].kind) };
    let mut sizes: Vec<usize> = facet_orbits.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    check(
        "transitive on facet kinds",
        facet_orbits.iter().all(by_kind) && sizes == vec![2, 6, 8, 8],
        format!("orbit sizes {sizes:?}"),
    );

    let vclasses = classify_vertices(a)?;
    let vertex_orbits = group.vertex_orbits(a);
    let mut vsizes: Vec<usize> = vertex_orbits.iter().map(Vec::len).collect();
    vsizes.sort_unstable();
    let homogeneous = vertex_orbits.iter().all(|o| {
        o.iter().all(|&v| {
            let same_ideal_kind = a.vertices()[v].ideal == a.vertices()[o[0]].ideal;
            let eq = |x: usize| matches!(vclasses[x], polytope::ks::VertexClass::EquatorialIdeal);
            same_ideal_kind && eq(v) == eq(o[0])
        })
    });
    check("transitive on vertex classes", homogeneous && vsizes == vec![8, 12, 24], format!("orbit sizes {vsizes:?}"));

    let word = ["a", "m", "l", "m", "n", "l", "m"];
    let mut prod = Symmetry::identity(a.polytope());
    for w in word {
        prod = prod.compose(&named_symmetry(a, w)?);
    }
    let r = named_symmetry(a, "r")?;
    check("r = a m l m n l m", prod.same_element(&r), String::new());

    Ok(StructureReport { checks, facet_orbits, vertex_orbit_sizes: vsizes, orientation_preserving: plus.len() })
}
