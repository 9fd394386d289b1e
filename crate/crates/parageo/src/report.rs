//! Entry analysis driver, deterministic JSON reports, and the paper-anchor
//! registry executed by `verify-paper`.
//!
//! Anchors record the printed claims of the source text verbatim in their
//! citation strings. A failing anchor is a finding, not an error: several
//! printed values are refuted by the exact computation (each carries a
//! `note` explaining the verified value), and the registry reports them
//! honestly rather than adjusting the expectation.

use crate::connfam::{canonical, canonical_torsion_formula, p_one_form, ricci_forms_of_curvature};
use crate::exact::{parse_scalar, ratq, Scalar};
use crate::fourdim::{clc_residual, goldberg_sachs, lemr_check, GoldbergSachs, LemrReport};
use crate::frame::{type_split, Tensor};
use crate::geometry::{curvature, ricci_scalar, weyl, weyl_split};
use crate::hyperpara::{
    asd_certificate, bismut_common, common_lee, flatten, mlq_lee_residuals, nnn_residuals,
    nuij_residuals, omega_forms, ParaTriple,
};
use crate::liealg::{catalog, CatalogEntry, LieError};
use crate::paraherm::{ClassFlags, Flag, Structure};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Structure(#[from] crate::paraherm::StructError),
    #[error("hyper-paracomplex analysis failed: {0}")]
    Triple(#[from] crate::hyperpara::TripleError),
}

/// Symbolic checks of the canonical family, all in the free parameter t.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FamilyReport {
    pub preserves_metric: bool,
    pub preserves_p: bool,
    pub torsion_matches_formula: bool,
    pub torsion_linear_in_t: bool,
    pub chern_equals_df_correction: bool,
    pub chern_torsion_type_20: bool,
    pub her_first: bool,
    pub her_second: bool,
    pub bismut_torsion_is_daf_minus_n: bool,
    pub rform_identity: bool,
    pub chern_curvature_type_11: bool,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct HyperReport {
    pub triple_valid: bool,
    pub integrable: bool,
    pub lee_forms_equal: bool,
    pub mlq_equivalence: bool,
    pub nuij_zero: bool,
    pub omega_solved: bool,
    pub mlq_lee_identities: bool,
    pub nnn_identities: bool,
    pub star_sign_table: Option<[i8; 3]>,
    pub bismut_parallel_suite: Option<bool>,
    pub asd_certificate: Option<bool>,
    pub flatten_flat: Option<bool>,
    pub flatten_preserves_triple: Option<bool>,
}

/// Full analysis of one catalog entry.
pub struct EntryAnalysis {
    pub entry: CatalogEntry,
    pub structure: Structure,
    pub curvature_abcd: Scalar,
    pub scalar_curvature: Scalar,
    pub w_zero: bool,
    pub w_plus_zero: bool,
    pub flags: ClassFlags,
    pub gs: GoldbergSachs,
    pub lemr: LemrReport,
    pub clc_zero: bool,
    pub family: FamilyReport,
    pub hyper: HyperReport,
    pub nabla_theta_zero: bool,
}

pub fn analyze_entry(entry: &CatalogEntry) -> Result<EntryAnalysis, AnalysisError> {
    let s = Structure::new(entry.algebra.clone(), entry.metric.clone(), entry.j1.clone())?;
    let params = s.params().clone();
    let r4 = curvature(&s.algebra, &s.lc, &s.metric);
    let (rho, sc) = ricci_scalar(&r4, &s.metric);
    let curvature_abcd = r4.get(&[0, 1, 2, 3]).clone();
    let w = weyl(&r4, &rho, &sc, &s.metric);
    let split = weyl_split(&w, &s.metric, &s.star);
    let w_zero = w.is_zero();
    let w_plus_zero = split.w_plus.is_zero();
    let flags = s.classify();
    let gs = goldberg_sachs(&s);
    let lemr = lemr_check(&s);
    let clc_zero = clc_residual(&s).is_zero();
    let nabla_theta_zero = crate::geometry::cov_deriv(&s.lc, &s.theta).is_zero();

    // canonical family, symbolically in t
    let t = Scalar::param(&params, "t").expect("catalog sessions declare t");
    let fam = canonical(&s, &t);
    let (pg, pp) = fam.preserves_structure(&s);
    let torsion_matches_formula = fam.torsion.sub(&canonical_torsion_formula(&s, &t)).is_zero();
    let torsion_linear_in_t = {
        let tidx = params.index_of("t").unwrap();
        let mut ok = true;
        for idx in fam.conn.gamma.indices() {
            let v = fam.conn.gamma.get(&idx);
            if v.numerator().degree_in(tidx) > 1 || v.denominator().degree_in(tidx) > 0 {
                ok = false;
            }
        }
        ok
    };
    let one = Scalar::one(&params);
    let chern = canonical(&s, &one);
    // eq ch: potential must equal -1/2 dF(PX, Y, Z)
    let chern_equals_df_correction = {
        let mhalf = Scalar::constant(&params, ratq(-1, 2));
        let dfp = s.d_f.apply_endo(0, &s.p).scale(&mhalf);
        chern.potential.sub(&dfp).is_zero()
    };
    let chern_torsion_type_20 = {
        let (t11, t02, t20) = type_split(&chern.torsion, &s.p);
        let _ = t20;
        t11.is_zero() && t02.is_zero()
    };
    let (her_first, her_second) = {
        let (t11, t02, t20) = type_split(&fam.torsion, &s.p);
        let first = t02.add(&s.n_low).is_zero();
        let third = Scalar::constant(&params, ratq(1, 3));
        let second = crate::frame::bianchi(&t20)
            .sub(&crate::frame::bianchi(&t11))
            .add(&s.da_f_plus.scale(&third))
            .is_zero();
        (first, second)
    };
    let minus_one = Scalar::int(&params, -1);
    let bismut = canonical(&s, &minus_one);
    let bismut_torsion_is_daf_minus_n =
        bismut.torsion.sub(&s.da_f_plus.sub(&s.n_low)).is_zero();
    let rform_identity = {
        let r1 = curvature(&s.algebra, &chern.conn, &s.metric);
        let rb = curvature(&s.algebra, &bismut.conn, &s.metric);
        let f1 = ricci_forms_of_curvature(&s, &r1);
        let fb = ricci_forms_of_curvature(&s, &rb);
        let pth = p_one_form(&s.theta, &s.p);
        let dpth = s.algebra.d_invariant(&pth);
        fb.r.sub(&f1.r).sub(&dpth).is_zero()
    };
    let chern_curvature_type_11 = {
        let r1 = curvature(&s.algebra, &chern.conn, &s.metric);
        let rpp = r1.apply_endo(0, &s.p).apply_endo(1, &s.p);
        rpp.add(&r1).is_zero()
    };
    let family = FamilyReport {
        preserves_metric: pg,
        preserves_p: pp,
        torsion_matches_formula,
        torsion_linear_in_t,
        chern_equals_df_correction,
        chern_torsion_type_20,
        her_first,
        her_second,
        bismut_torsion_is_daf_minus_n,
        rform_identity,
        chern_curvature_type_11,
    };

    // hyper-paracomplex suite
    let triple = ParaTriple {
        algebra: entry.algebra.clone(),
        metric: entry.metric.clone(),
        j1: entry.j1.clone(),
        j2: entry.j2.clone(),
        j3: entry.j3.clone(),
    };
    let tdiag = triple.validate();
    let cl = common_lee(&triple, &s.lc);
    let nuij = nuij_residuals(&triple);
    let (omega_solved, mlq_lee_identities, nnn_identities) = match omega_forms(&triple, &s.lc) {
        Ok(om) => {
            let mlq = mlq_lee_residuals(&triple, &s.lc, &om);
            let nnn = nnn_residuals(&triple, &om);
            (
                true,
                mlq.iter().all(Tensor::is_zero),
                nnn.iter().all(Tensor::is_zero),
            )
        }
        Err(_) => (false, false, false),
    };
    let (star_sign_table, bismut_parallel_suite) = if cl.integrable {
        match bismut_common(&triple, &s, &s.lc) {
            Ok(b) => {
                let all = b.preserves_g
                    && b.preserves_j.iter().all(|&x| x)
                    && b.phi1_parallel;
                (Some(b.star_sign_table), Some(all))
            }
            Err(_) => (None, Some(false)),
        }
    } else {
        (None, None)
    };
    let asd = if cl.integrable { asd_certificate(&triple, &s).ok() } else { None };
    let (flatten_flat, flatten_preserves_triple) = if s.d_theta.is_zero() {
        match flatten(&triple, &s, &s.lc) {
            Ok(f) => (Some(f.curvature_zero), Some(f.preserves_j.iter().all(|&x| x))),
            Err(_) => (None, None),
        }
    } else {
        (None, None)
    };
    let hyper = HyperReport {
        triple_valid: tdiag.pass(),
        integrable: cl.integrable,
        lee_forms_equal: cl.lee_forms_equal,
        mlq_equivalence: cl.integrable == cl.lee_forms_equal,
        nuij_zero: nuij.iter().all(Tensor::is_zero),
        omega_solved,
        mlq_lee_identities,
        nnn_identities,
        star_sign_table,
        bismut_parallel_suite,
        asd_certificate: asd,
        flatten_flat,
        flatten_preserves_triple,
    };

    Ok(EntryAnalysis {
        entry: entry.clone(),
        structure: s,
        curvature_abcd,
        scalar_curvature: sc,
        w_zero,
        w_plus_zero,
        flags,
        gs,
        lemr,
        clc_zero,
        family,
        hyper,
        nabla_theta_zero,
    })
}

fn flag_str(f: &Flag) -> String {
    match f {
        Flag::Holds => "holds".into(),
        Flag::Fails => "fails".into(),
        Flag::ParamDependent(v) => {
            let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
            format!("parameter-dependent: vanishing of [{}]", parts.join(", "))
        }
    }
}

/// JSON-ready analysis record; deterministic (sorted maps, canonical
/// scalar strings).
#[derive(Debug, serde::Serialize)]
pub struct AnalysisRecord {
    pub schema: u32,
    pub entry: String,
    pub description: String,
    pub parameters: BTreeMap<String, String>,
    pub conventions: BTreeMap<String, String>,
    pub computed: BTreeMap<String, serde_json::Value>,
    pub goldberg_sachs: GoldbergSachs,
    pub family: FamilyReport,
    pub hyper: HyperReport,
}

pub fn conventions() -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert(
        "curvature".into(),
        "R(X,Y)Z = nab_X nab_Y Z - nab_Y nab_X Z - nab_[X,Y] Z; R(X,Y,Z,V) = g(R(X,Y)Z,V); \
         gauge fixed by R(A,B,C,D) = 1 on the PHC5 entry"
            .into(),
    );
    m.insert(
        "lee_form".into(),
        "theta(X) = (1/2) sum_i eps_i dF(e_i, P e_i, X); satisfies dF = theta ^ F in dim 4; \
         the source text prints the opposite sign in some examples (recorded per anchor)"
            .into(),
    );
    m.insert(
        "orientation".into(),
        "volume sign chosen per entry so that *F = +F (fundamental form self-dual)".into(),
    );
    m.insert(
        "two_form_inner_product".into(),
        "<a,b> = -(1/2) a_ij b^ij, normalized so |F|^2 = +2".into(),
    );
    m.insert(
        "wplus_blocks".into(),
        "W+ = -(k/8) F(x)F + (k/12) id + (1/4)(psi (x) F + F (x) psi), psi = dtheta^+; \
         printed form carries the opposite sign on k and psi"
            .into(),
    );
    m.insert(
        "tau".into(),
        "tau = tr_g r is the full contraction g^{ab} r(e_a, P e_b); makes s* = tau exact".into(),
    );
    m
}

pub fn to_record(a: &EntryAnalysis) -> AnalysisRecord {
    let mut computed: BTreeMap<String, serde_json::Value> = BTreeMap::new();
    let theta_str: Vec<String> =
        (0..4).map(|i| a.structure.theta.get(&[i]).to_string()).collect();
    computed.insert("theta_coframe".into(), serde_json::json!(theta_str));
    computed.insert(
        "curvature_ABCD".into(),
        serde_json::json!(a.curvature_abcd.to_string()),
    );
    computed.insert(
        "scalar_curvature".into(),
        serde_json::json!(a.scalar_curvature.to_string()),
    );
    computed.insert("d_theta_zero".into(), serde_json::json!(a.structure.d_theta.is_zero()));
    computed.insert("nabla_theta_zero".into(), serde_json::json!(a.nabla_theta_zero));
    computed.insert("weyl_zero".into(), serde_json::json!(a.w_zero));
    computed.insert("weyl_plus_zero".into(), serde_json::json!(a.w_plus_zero));
    computed.insert("nijenhuis_zero".into(), serde_json::json!(a.structure.n_low.is_zero()));
    computed.insert("conformal_scalar_k".into(), serde_json::json!(a.lemr.k.to_string()));
    computed.insert("orientation".into(), serde_json::json!(a.structure.orientation));
    computed.insert("clc_residual_zero".into(), serde_json::json!(a.clc_zero));
    let f = &a.flags;
    for (name, fl) in [
        ("class_para_kaehler", &f.para_kaehler),
        ("class_para_hermitian", &f.para_hermitian),
        ("class_nearly_para_kaehler", &f.nearly_para_kaehler),
        ("class_almost_para_kaehler", &f.almost_para_kaehler),
        ("class_quasi_para_kaehler", &f.quasi_para_kaehler),
        ("class_locally_conformally_para_kaehler", &f.locally_conformally_para_kaehler),
    ] {
        computed.insert(name.into(), serde_json::json!(flag_str(fl)));
    }
    let lemr_zero = a.lemr.scalar_sum.is_zero()
        && a.lemr.k_vs_scalars.is_zero()
        && a.lemr.k_vs_bismut_tau.is_zero()
        && a.lemr.trace_11.is_zero()
        && a.lemr.rho_star_skew.is_zero()
        && a.lemr.rho_star_vs_r.is_zero()
        && a.lemr.s_star_vs_tau.is_zero();
    computed.insert("lemr_residuals_zero".into(), serde_json::json!(lemr_zero));
    let parameters: BTreeMap<String, String> =
        a.entry.preset.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
    AnalysisRecord {
        schema: 1,
        entry: a.entry.name.clone(),
        description: a.entry.description.clone(),
        parameters,
        conventions: conventions(),
        computed,
        goldberg_sachs: a.gs.clone(),
        family: a.family.clone(),
        hyper: a.hyper.clone(),
    }
}

// ---------------------------------------------------------------------------
// anchor registry
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, serde::Serialize)]
pub struct AnchorResult {
    pub id: String,
    pub entry: String,
    pub pass: bool,
    pub computed: String,
    pub expected: String,
    pub citation: String,
    /// set on documented discrepancies between the printed claim and the
    /// verified value
    pub note: Option<String>,
}

fn theta_equals(a: &EntryAnalysis, coeffs: [i64; 4]) -> (bool, String) {
    let params = a.structure.params().clone();
    let mut ok = true;
    for (i, &c) in coeffs.iter().enumerate() {
        if (a.structure.theta.get(&[i]) - &Scalar::int(&params, c)).is_zero() == false {
            ok = false;
        }
    }
    let computed: Vec<String> = (0..4).map(|i| a.structure.theta.get(&[i]).to_string()).collect();
    (ok, format!("[{}]", computed.join(", ")))
}

/// Run the complete registry; sorted by id for deterministic output.
pub fn verify_paper(filter: Option<&str>) -> Result<Vec<AnchorResult>, AnalysisError> {
    let mut out: Vec<AnchorResult> = Vec::new();
    let entries = catalog()?;
    let mut analyses: BTreeMap<String, EntryAnalysis> = BTreeMap::new();
    for e in &entries {
        analyses.insert(e.name.clone(), analyze_entry(e)?);
    }
    let params = crate::liealg::catalog_params();

    let mut push = |id: &str,
                    entry: &str,
                    pass: bool,
                    computed: String,
                    expected: &str,
                    citation: &str,
                    note: Option<&str>| {
        out.push(AnchorResult {
            id: id.into(),
            entry: entry.into(),
            pass,
            computed,
            expected: expected.into(),
            citation: citation.into(),
            note: note.map(|s| s.into()),
        });
    };

    // curvature anchors
    {
        let a = &analyses["phc5"];
        push(
            "curv.phc5",
            "phc5",
            a.curvature_abcd == Scalar::int(&params, 1),
            a.curvature_abcd.to_string(),
            "1",
            "Example nex1 i): \"R^g(A,B,C,D)=1\"",
            None,
        );
        let a = &analyses["sol4_1"];
        push(
            "curv.sol4_1",
            "sol4_1",
            a.curvature_abcd == Scalar::int(&params, 1),
            a.curvature_abcd.to_string(),
            "1",
            "Thm. inoe proof: \"R(A,B,C,D)=1\"",
            None,
        );
        let a = &analyses["phc9_c_minus2"];
        push(
            "curv.phc9_c_minus2",
            "phc9_c_minus2",
            a.curvature_abcd == Scalar::constant(&params, ratq(15, 2)),
            a.curvature_abcd.to_string(),
            "15/2",
            "Example nex1 ii): \"R(A,B,C,D)=15/2\"",
            None,
        );
        let a = &analyses["phc6"];
        let expect = parse_scalar("1 - a", &params).unwrap();
        push(
            "curv.phc6.symbolic",
            "phc6",
            a.curvature_abcd == expect,
            a.curvature_abcd.to_string(),
            "1 - a",
            "Example nex1 ii): \"R^g(A,B,C,D)=(1-a)\"",
            None,
        );
        let a = &analyses["phc9"];
        let printed = parse_scalar("1/2*(2*c*c - 3*c - 2*a*c + 2*a + 1)", &params).unwrap();
        push(
            "curv.phc9.symbolic",
            "phc9",
            a.curvature_abcd == printed,
            a.curvature_abcd.to_string(),
            "1/2(2c^2 - 3c - 2ac + 2a + 1)",
            "Example nex1 ii): \"R^g(A,B,C,D)=\\frac{1}{2}(2c^2-3c-2ac+2a+1)\"",
            Some(
                "verified value is 1/2(2c^2 - 3c - 4ac + 2a + 1); the printed ac-coefficient \
                 is refuted by the exact computation and by an independent finite-difference \
                 oracle on a coordinate realization; both agree at a = 0 (all printed instances)",
            ),
        );
        let a = &analyses["phc10"];
        let expect = parse_scalar("1/2*(c*c + 2*a*c - c)", &params).unwrap();
        push(
            "curv.phc10.symbolic",
            "phc10",
            a.curvature_abcd == expect,
            a.curvature_abcd.to_string(),
            "1/2(c^2 + 2ac - c)",
            "Example nex1 ii): \"R^g(A,B,C,D)=\\frac{1}{2}(c^2+2ac-c)\"",
            None,
        );
        let a = &analyses["phc9_c_minus1"];
        push(
            "curv.phc9_c_minus1.nonzero",
            "phc9_c_minus1",
            !a.curvature_abcd.is_zero(),
            a.curvature_abcd.to_string(),
            "nonzero",
            "Example after nex1: \"the curvature has non-zero value on an orthonormal basis\"",
            None,
        );
        push(
            "curv.hopf.nonflat",
            "hopf",
            !curvature_is_zero(&analyses["hopf"]),
            format!("curvature zero: {}", curvature_is_zero(&analyses["hopf"])),
            "R^g != 0",
            "Lemma hopf proof: \"It is easy to check that g is not flat\"",
            None,
        );
    }

    // Lee form anchors
    {
        let (ok, comp) = theta_equals(&analyses["phc5"], [0, 1, 1, 0]);
        push(
            "lee.phc5",
            "phc5",
            ok,
            comp,
            "B - C (coframe [0,1,1,0])",
            "Example nex1 i): \"the Lee form theta=B-C is closed\"",
            None,
        );
        let (ok, comp) = theta_equals(&analyses["phc6"], [0, 1, 1, 0]);
        push(
            "lee.phc6",
            "phc6",
            ok,
            comp,
            "B - C for all (a,b)",
            "Example nex1 ii): \"The Lee forms of these hyper-paraHermitian structures are closed\"",
            None,
        );
        let (ok, comp) = theta_equals(&analyses["sol4_1"], [0, 1, 1, 0]);
        push(
            "lee.sol4_1",
            "sol4_1",
            ok,
            comp,
            "B - C",
            "Thm. inoe proof: \"The Lee form theta=B-C\"",
            None,
        );
        let (ok, comp) = theta_equals(&analyses["phc9_c_minus1"], [0, 0, 0, 0]);
        push(
            "lee.phc9_c_minus1.zero",
            "phc9_c_minus1",
            ok,
            comp,
            "0",
            "Example after nex1: \"the Lee form vanishes\"",
            None,
        );
        let (ok, comp) = theta_equals(&analyses["phc9_c_minus2"], [0, 1, 1, 0]);
        push(
            "lee.phc9_c_minus2",
            "phc9_c_minus2",
            ok,
            comp,
            "B - C",
            "Example nex1 ii): \"The Lee form theta=B-C is not nabla^g-parallel but closed\"",
            Some(
                "verified value is C - B = -(B - C): the printed sign is inconsistent with the \
                 defining formula of the Lee form, which this entry satisfies with the opposite \
                 sign; the structural claims (closed, non-parallel) hold for the verified value",
            ),
        );
        let (ok, comp) = theta_equals(&analyses["hopf"], [-1, 0, 0, 0]);
        push(
            "lee.hopf",
            "hopf",
            ok,
            comp,
            "-Z (coframe [-1,0,0,0])",
            "Lemma hopf: \"the Lee form theta=-Z\"",
            Some(
                "verified value is +Z: with theta = +Z the conformal gauge connection is flat \
                 and preserves all three structures (the content of the Lemma), while -Z fails \
                 to preserve them; the printed sign is a slip against the defining formula",
            ),
        );
        // symbolic direction anchors
        for (name, factor) in [("phc9", "c + 1"), ("phc10", "-c - 1")] {
            let a = &analyses[name];
            let f = parse_scalar(factor, &params).unwrap();
            let mut ok = true;
            for (i, &c) in [0i64, 1, 1, 0].iter().enumerate() {
                let expect = &f * &Scalar::int(&params, c);
                if !(a.structure.theta.get(&[i]) - &expect).is_zero() {
                    ok = false;
                }
            }
            let comp: Vec<String> =
                (0..4).map(|i| a.structure.theta.get(&[i]).to_string()).collect();
            push(
                &format!("lee.{name}.direction"),
                name,
                ok,
                format!("[{}]", comp.join(", ")),
                &format!("({factor}) (B - C)"),
                "Example nex1 ii): the Lee forms are closed (no explicit value printed)",
                None,
            );
        }
        // closedness of every Lee form
        for name in ["hopf", "phc5", "phc6", "phc9", "phc10", "sol4_1", "phc9_c_minus1", "phc9_c_minus2"] {
            let a = &analyses[name];
            push(
                &format!("lee.{name}.closed"),
                name,
                a.structure.d_theta.is_zero(),
                format!("d theta zero: {}", a.structure.d_theta.is_zero()),
                "d theta = 0",
                "Example nex1 / Thm. inoe / Lemma hopf: the Lee forms are closed",
                None,
            );
        }
        push(
            "lee.hopf.parallel",
            "hopf",
            analyses["hopf"].nabla_theta_zero,
            format!("nabla theta zero: {}", analyses["hopf"].nabla_theta_zero),
            "nabla^g theta = 0",
            "Lemma hopf: \"the Lee form theta=-Z is nabla^g-parallel\"",
            None,
        );
        push(
            "lee.phc9_c_minus2.nonparallel",
            "phc9_c_minus2",
            !analyses["phc9_c_minus2"].nabla_theta_zero,
            format!("nabla theta zero: {}", analyses["phc9_c_minus2"].nabla_theta_zero),
            "nabla^g theta != 0",
            "Example nex1 ii): \"not nabla^g-parallel but closed\"",
            None,
        );
        push(
            "lee.sol4_1.nonparallel",
            "sol4_1",
            !analyses["sol4_1"].nabla_theta_zero,
            format!("nabla theta zero: {}", analyses["sol4_1"].nabla_theta_zero),
            "nabla^g theta != 0",
            "Thm. inoe proof: \"The Lee form theta=B-C is not nabla^g-parallel but closed\"",
            Some(
                "refuted: nabla^g theta = 0 exactly on sol4_1. Independently confirmed in the \
                 printed coordinate chart, where theta = dt and every Christoffel symbol \
                 Gamma^t vanishes; the printed sentence appears copied from the PHC9 example, \
                 where non-parallelism does hold",
            ),
        );
    }

    // anti-self-duality and Weyl anchors
    for name in ["hopf", "phc5", "phc6", "phc9", "phc10", "sol4_1", "phc9_c_minus1", "phc9_c_minus2", "abelian4"] {
        let a = &analyses[name];
        push(
            &format!("asd.{name}"),
            name,
            a.w_plus_zero,
            format!("W+ zero: {}", a.w_plus_zero),
            "W+ = 0",
            "Thm. inq: \"the corresponding neutral conformal structure is anti-self-dual\"",
            None,
        );
    }
    for name in ["sol4_1", "phc9_c_minus1", "phc9_c_minus2"] {
        let a = &analyses[name];
        push(
            &format!("weyl.{name}.nonzero"),
            name,
            !a.w_zero,
            format!("W zero: {}", a.w_zero),
            "W != 0",
            "Thm. inoe: \"anti-self-dual non-Weyl flat\" / Example: \"non-zero Weyl tensor\"",
            None,
        );
    }
    push(
        "weyl.hopf.conformally_flat",
        "hopf",
        analyses["hopf"].w_zero,
        format!("W zero: {}", analyses["hopf"].w_zero),
        "W = 0",
        "Lemma hopf: \"locally ... conformally equivalent to a flat hyper-paraKaehler structure\"",
        None,
    );

    // eq. 4.1 and structural identity anchors, every entry
    for (name, a) in &analyses {
        let tw = crate::liealg::wedge(&a.structure.theta, &a.structure.f);
        push(
            &format!("eq41.{name}"),
            name,
            a.structure.d_f.sub(&tw).is_zero(),
            "dF - theta^F = 0".into(),
            "dF = theta ^ F",
            "eq. 4.1: \"dF=\\theta\\wedge F\"",
            None,
        );
        push(
            &format!("family.{name}"),
            name,
            a.family.preserves_metric
                && a.family.preserves_p
                && a.family.torsion_matches_formula
                && a.family.chern_equals_df_correction
                && a.family.chern_torsion_type_20
                && a.family.her_first
                && a.family.her_second
                && a.family.bismut_torsion_is_daf_minus_n
                && a.family.rform_identity
                && a.family.chern_curvature_type_11,
            format!("{:?}", a.family),
            "all canonical-family identities",
            "Definition of canonical connections; Thm. cher; eq. her; eq. bis; eq. rform",
            None,
        );
        push(
            &format!("lemr.{name}"),
            name,
            a.lemr.scalar_sum.is_zero()
                && a.lemr.k_vs_scalars.is_zero()
                && a.lemr.k_vs_bismut_tau.is_zero()
                && a.lemr.trace_11.is_zero()
                && a.lemr.rho_star_skew.is_zero()
                && a.lemr.rho_star_vs_r.is_zero()
                && a.lemr.s_star_vs_tau.is_zero(),
            "all residuals zero".into(),
            "Prop. lemr identities",
            "Prop. lemr: \"s+s^*=2\\delta\\theta+g(\\theta,\\theta)\", \"k=-\\frac{1}{2}(s+3s^*)=-\\tau^{-1}\"",
            None,
        );
        push(
            &format!("clc.{name}"),
            name,
            a.clc_zero,
            format!("residual zero: {}", a.clc_zero),
            "eq. clc residual = 0",
            "eq. clc: \"R^1(X,Y,Z,V)=R^g(X,Y,Z,V)-\\frac{1}{2}d(P\\theta)(X,Y)F(V,Z)+...\"",
            None,
        );
        push(
            &format!("gs.{name}"),
            name,
            a.gs.agreement && (a.gs.bis1_wplus_zero == a.gs.bis1_ricci_asd),
            format!("{:?}", a.gs),
            "three equivalent conditions agree; bis1 equivalence",
            "Thm. th4; Prop. bis1",
            None,
        );
        push(
            &format!("hyper.{name}"),
            name,
            a.hyper.triple_valid
                && a.hyper.nuij_zero
                && a.hyper.omega_solved
                && a.hyper.mlq_lee_identities
                && a.hyper.nnn_identities
                && a.hyper.mlq_equivalence,
            format!("{:?}", a.hyper),
            "triple valid; nuij, zzv, mlq, nnn identities",
            "eq. par1/par2; Prop. nuij; eq. zzv; Lemma mlq; eq. nnn",
            None,
        );
        if let Some(sig) = a.hyper.star_sign_table {
            let degenerate = sig == [0, 0, 0] && a.structure.theta.is_zero();
            push(
                &format!("startheta.{name}"),
                name,
                sig == [-1, -1, 1] || degenerate,
                format!("{sig:?}"),
                "[-1, -1, +1] (or vanishing Lee form)",
                "Thm. inq proof: \"T=*\\theta=-\\theta\\circ J_1\\wedge F_1= -\\theta\\circ J_2\\wedge F_2= +\\theta\\circ J_3\\wedge F_3\"",
                None,
            );
        }
        if let Some(b) = a.hyper.bismut_parallel_suite {
            push(
                &format!("bismut.{name}"),
                name,
                b,
                format!("parallel suite: {b}"),
                "nab^b g = nab^b F_a = nab^b Phi_1 = 0",
                "Thm. inq proof: \"\\nabla^b:=\\nabla^g +\\frac{1}{2}T\" preserves the structure",
                None,
            );
        }
    }

    // integrability anchors: the printed structures are claimed to be
    // hyper-paracomplex
    for name in ["hopf", "phc5", "phc6", "phc9", "sol4_1", "phc9_c_minus1", "phc9_c_minus2", "phc10_integrable"] {
        push(
            &format!("integrable.{name}"),
            name,
            analyses[name].hyper.integrable,
            format!("integrable: {}", analyses[name].hyper.integrable),
            "N_1 = N_2 = N_3 = 0",
            "Example nex1 / Lemma hopf / Thm. inoe: the listed structures are hyper-paracomplex",
            None,
        );
    }
    push(
        "integrable.phc10",
        "phc10",
        analyses["phc10"].hyper.integrable,
        format!("integrable: {}", analyses["phc10"].hyper.integrable),
        "N_1 = N_2 = N_3 = 0",
        "Example nex1 ii): \"These algebras admit a hyper-paracomplex structure\"",
        Some(
            "refuted as printed: with the bracket [W,X] = (1/2)X + aY + bZ, [W,Y] = (c-1/2)Y \
             the structures J2 and J3 have constant nonzero Nijenhuis tensors for every \
             (a,b,c). Replacing the coefficient 1/2 by 1 (entry phc10_integrable, brackets \
             [W,X] = X + aY + bZ, [W,Y] = (c-1)Y) gives an integrable triple; the printed \
             curvature value matches the 1/2-variant, so the two printed claims are mutually \
             inconsistent",
        ),
    );

    // flattening anchors
    push(
        "flatten.hopf",
        "hopf",
        analyses["hopf"].hyper.flatten_flat == Some(true)
            && analyses["hopf"].hyper.flatten_preserves_triple == Some(true),
        format!(
            "flat: {:?}, preserves triple: {:?}",
            analyses["hopf"].hyper.flatten_flat, analyses["hopf"].hyper.flatten_preserves_triple
        ),
        "conformal gauge connection flat and triple-preserving",
        "Lemma hopf: \"the complex product connection coincides with the Levi-Civita connection of the flat hyper-paraKaehler metric\"",
        None,
    );
    for name in ["phc5", "phc6", "sol4_1", "phc9_c_minus2", "phc9_c_minus1", "phc10_integrable"] {
        push(
            &format!("flatten.{name}.preserves"),
            name,
            analyses[name].hyper.flatten_preserves_triple == Some(true),
            format!("{:?}", analyses[name].hyper.flatten_preserves_triple),
            "gauge connection preserves the triple",
            "Prop. qup: the structures are conformally hyper-paraKaehler (hypersymplectic)",
            None,
        );
    }

    // Hopf Koszul table
    {
        let hopf = &entries.iter().find(|e| e.name == "hopf").unwrap();
        let s = &analyses["hopf"].structure;
        // frame order (Z,X,Y,W): X=1, Y=2, W=3
        let checks: [(usize, usize, usize, i64); 6] = [
            (1, 2, 3, 1),  // 2 nab_X Y = W
            (2, 3, 1, -1), // 2 nab_Y W = -X
            (3, 1, 2, 1),  // 2 nab_W X = Y
            (1, 3, 2, -1), // 2 nab_X W = -Y
            (2, 1, 3, -1), // 2 nab_Y X = -W
            (3, 2, 1, 1),  // 2 nab_W Y = X
        ];
        let params = s.params().clone();
        let mut ok = true;
        for (a, b, k, v) in checks {
            let expect = Scalar::constant(&params, ratq(v, 2));
            if !(s.lc.gamma.get(&[a, b, k]) - &expect).is_zero() {
                ok = false;
            }
            // and the remaining components of nab_a b vanish
            for m in 0..4 {
                if m != k && !s.lc.gamma.get(&[a, b, m]).is_zero() {
                    ok = false;
                }
            }
        }
        let _ = hopf;
        push(
            "koszul.hopf",
            "hopf",
            ok,
            format!("six printed values reproduced: {ok}"),
            "2 nab_X Y = W, 2 nab_Y W = -X, 2 nab_W X = Y and reversed signs",
            "Lemma hopf proof: \"The Koszul formula gives\"",
            None,
        );
    }

    let mut out: Vec<AnchorResult> = out;
    if let Some(f) = filter {
        out.retain(|r| r.id.starts_with(f));
    }
    out.sort_by(|x, y| x.id.cmp(&y.id));
    Ok(out)
}

fn curvature_is_zero(a: &EntryAnalysis) -> bool {
    curvature(&a.structure.algebra, &a.structure.lc, &a.structure.metric).is_zero()
}
