//! The full pipeline from a surface and a field to an orbit report.

use thiserror::Error;

use crate::graphaut::enumerate_automorphisms;
use crate::homology::{self, HomologyError};
use crate::io::IoError;
use crate::orbitcalc::{self, minimal_graph, MinimalGraphSummary, OrbitError, OrbitReport, Pi0Leaf};
use crate::plmorse::{validate_with_order, LevelOrder, MorseData, MorseError, ScalarField};
use crate::reeb::{build_with_order, detect_type, finalize_morse, ReebError, ReebGraph};
use crate::surface::{classify_surface, euler_characteristic, SurfaceClass, SurfaceError, TriSurface};

/// Cap on enumerated graph automorphisms.
pub const AUTOMORPHISM_LIMIT: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Reeb(#[from] ReebError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

impl AnalysisError {
    /// Process exit code for this error class.
    pub fn code(&self) -> i32 {
        match self {
            AnalysisError::Io(IoError::Surface(_)) | AnalysisError::Surface(_) => 4,
            AnalysisError::Io(IoError::Morse(_)) | AnalysisError::Morse(_) => 5,
            AnalysisError::Io(_) => 3,
            AnalysisError::Reeb(ReebError::Morse(_)) => 5,
            AnalysisError::Reeb(_) => 6,
            AnalysisError::Homology(_) => 7,
            AnalysisError::Orbit(_) => 8,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AnalysisError::Io(IoError::Surface(_)) | AnalysisError::Surface(_) => "surface",
            AnalysisError::Io(IoError::Morse(_)) | AnalysisError::Morse(_) => "morse",
            AnalysisError::Io(_) => "parse",
            AnalysisError::Reeb(ReebError::Morse(_)) => "morse",
            AnalysisError::Reeb(_) => "reeb",
            AnalysisError::Homology(_) => "homology",
            AnalysisError::Orbit(_) => "orbit",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    /// Run the twist-independence computation.
    pub homology: bool,
    pub automorphism_limit: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { homology: true, automorphism_limit: AUTOMORPHISM_LIMIT }
    }
}

/// Outcome of the twist computation on `H_1(M \ Σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistCheck {
    pub h1_rank: usize,
    pub l: usize,
    /// `None` on non-orientable surfaces.
    pub independent: Option<bool>,
    pub independent_mod2: bool,
    pub curves_independent: bool,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub class: SurfaceClass,
    pub chi: i64,
    pub morse: MorseData,
    pub graph: ReebGraph,
    pub minimal: Option<MinimalGraphSummary>,
    pub automorphisms: usize,
    pub automorphisms_truncated: bool,
    pub report: OrbitReport,
    pub twists: Option<TwistCheck>,
}

pub fn analyze(s: &TriSurface, f: &ScalarField, opts: AnalysisOptions) -> Result<Analysis, AnalysisError> {
    let class = classify_surface(s);
    let order = LevelOrder::new(s, f)?;
    let raw = validate_with_order(s, &order)?;
    let graph = build_with_order(s, &order, &raw)?;
    let morse = finalize_morse(&raw, &graph);
    let saddle_free = detect_type(&class, f.codomain(), &morse, &graph)?;
    let minimal = if morse.is_simple { Some(minimal_graph(&graph)?) } else { None };
    let auts = enumerate_automorphisms(&graph, opts.automorphism_limit);
    let truncated = auts.len() >= opts.automorphism_limit;
    let mut report = orbitcalc::orbit_report(&class, &morse, &graph, minimal.as_ref(), &auts, saddle_free)?;
    if truncated {
        report.flags.push("automorphism enumeration truncated".to_string());
    }
    let twists = if opts.homology {
        let punctures = morse.critical_vertices();
        let system = homology::twist_system(s, &order, &graph, &punctures)?;
        let basis_rank = homology::h1_basis(s, &punctures)?.rank();
        let independent = match homology::twists_independent(&system) {
            Ok(b) => Some(b),
            Err(HomologyError::NonOrientableUnsupported) => None,
            Err(e) => return Err(e.into()),
        };
        Some(TwistCheck {
            h1_rank: basis_rank,
            l: system.len(),
            independent,
            independent_mod2: homology::twists_independent_mod2(&system),
            curves_independent: homology::curves_independent(&system),
        })
    } else {
        None
    };
    Ok(Analysis {
        class,
        chi: euler_characteristic(s),
        morse,
        graph,
        minimal,
        automorphisms: auts.len(),
        automorphisms_truncated: truncated,
        report,
        twists,
    })
}

/// Consistency properties every analysis must satisfy; returns violations.
pub fn check_properties(a: &Analysis) -> Vec<String> {
    let mut bad = Vec::new();
    let md = &a.morse;
    let (c0, c1, c2) = (md.c0 as i64, md.c1 as i64, md.c2 as i64);
    if c0 - c1 + c2 != a.chi {
        bad.push(format!("Morse equality: {c0}-{c1}+{c2} != {}", a.chi));
    }
    let point = md.c1 >= 1 || !a.class.orientable;
    if a.report.stabilizer_id.is_point() != point {
        bad.push(format!("stabilizer type {} for c1={}", a.report.stabilizer_id, md.c1));
    }
    let c = md.c0 + md.c1 + md.c2;
    let b = a.class.boundary_count as usize;
    if (a.report.codim_orbit, a.report.codim_orbit_cr) != (c + b, 3 * c + b) {
        bad.push("codimensions".to_string());
    }
    if let Some(m) = &a.minimal {
        if md.c1.checked_sub(m.r_c) != Some(m.contractions()) || (md.c0 + md.c2).checked_sub(m.r_e) != Some(m.contractions())
        {
            bad.push(format!("contraction bookkeeping: {} vs c1-rC, c0+c2-rE", m.contractions()));
        }
    }
    if md.is_generic && md.c1 >= 1 {
        if let Some(k) = a.report.k.and_then(|k| k.exact()) {
            if !orbitcalc::generic_orbit_consistency(&a.class, k, md) {
                bad.push("generic orbit type differs from Diff_id x (S1)^k".to_string());
            }
        }
    }
    if let Some(k) = a.report.k {
        if k.upper() > orbitcalc::k_bar(&a.class, md) {
            bad.push(format!("k={k} exceeds its bound"));
        }
    }
    if let Some(t) = &a.twists {
        if a.class.orientable && a.report.pi0_leaf == Pi0Leaf::Free(t.l) && t.independent != Some(true) {
            bad.push(format!("twists along {} internal curves are not independent", t.l));
        }
    }
    bad
}
