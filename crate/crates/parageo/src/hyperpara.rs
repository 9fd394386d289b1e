//! Hyper-paracomplex triples: paraquaternionic identity validation, the
//! Nijenhuis relation among the three structures, connection 1-forms from
//! the Levi-Civita connection, the common Lee form criterion, the shared
//! Bismut connection with its parallelism suite, the anti-self-duality
//! certificate, and conformal flattening.
//!
//! Labeling: the catalog fixes J1 := J2 J3, which makes (A1, A2, A3) :=
//! (J2, J1, J3) satisfy the product identity A1 A2 = A3 literally; the
//! omega-form and Lee-form identities below are phrased in these labels.

use crate::exact::{ratq, Scalar};
use crate::frame::{Endo, Metric, Tensor};
use crate::geometry::{conformal_gauge, curvature, nabla_endo, torsion, Connection, GeomError};
use crate::liealg::{wedge, LieAlgebra};
use crate::paraherm::{
    fundamental_form, lee_form_delta_route, lower_first, nijenhuis, Structure,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TripleError {
    #[error("triple validation failed: {0}")]
    Validation(String),
    #[error("omega system is inconsistent (non-paraquaternionic input)")]
    UnsolvableOmega,
    #[error("triple is not integrable")]
    NotIntegrable,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// An almost hyper-paracomplex triple with its compatible neutral metric.
pub struct ParaTriple {
    pub algebra: LieAlgebra,
    pub metric: Metric,
    pub j1: Endo,
    pub j2: Endo,
    pub j3: Endo,
}

/// Validation report: each identity checked exactly, with the first failing
/// identity named.
#[derive(Debug, Clone)]
pub struct TripleDiagnostics {
    pub failures: Vec<String>,
}

impl TripleDiagnostics {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

impl ParaTriple {
    pub fn params(&self) -> &std::sync::Arc<crate::exact::ParamSet> {
        self.algebra.params()
    }

    /// par1-ordered members (A1, A2, A3) = (J2, J1, J3) with A1 A2 = A3.
    pub fn par1_members(&self) -> [&Endo; 3] {
        [&self.j2, &self.j1, &self.j3]
    }

    pub fn validate(&self) -> TripleDiagnostics {
        let params = self.params().clone();
        let n = self.algebra.n;
        let id = Endo::identity(&params, n);
        let mut failures = Vec::new();
        let mut check = |name: &str, e: &Endo| {
            if !e.is_zero() {
                failures.push(name.to_string());
            }
        };
        check("J1^2 = 1", &self.j1.compose(&self.j1).sub(&id));
        check("J2^2 = 1", &self.j2.compose(&self.j2).sub(&id));
        check("J3^2 = -1", &self.j3.compose(&self.j3).add(&id));
        check("J1 J2 + J2 J1 = 0", &self.j1.compose(&self.j2).add(&self.j2.compose(&self.j1)));
        check("J1 J3 + J3 J1 = 0", &self.j1.compose(&self.j3).add(&self.j3.compose(&self.j1)));
        check("J2 J3 + J3 J2 = 0", &self.j2.compose(&self.j3).add(&self.j3.compose(&self.j2)));
        check("J2 J1 = J3", &self.j2.compose(&self.j1).sub(&self.j3));
        // metric compatibility per the P-Hermitian convention
        for (name, j, sign) in [
            ("g(J1., J1.) = -g", &self.j1, -1i64),
            ("g(J2., J2.) = -g", &self.j2, -1),
            ("g(J3., J3.) = +g", &self.j3, 1),
        ] {
            let mut ok = true;
            'outer: for x in 0..n {
                for y in 0..n {
                    let mut acc = Scalar::zero(&params);
                    for p in 0..n {
                        for q in 0..n {
                            let c = &(j.get(p, x) * j.get(q, y)) * self.metric.at(p, q);
                            acc = acc + &c;
                        }
                    }
                    let target = &Scalar::int(&params, sign) * self.metric.at(x, y);
                    if !(&acc - &target).is_zero() {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if !ok {
                failures.push(name.to_string());
            }
        }
        TripleDiagnostics { failures }
    }

    /// Nijenhuis tensors (vector-valued) of the three members.
    pub fn nijenhuis_all(&self) -> [Tensor; 3] {
        [
            nijenhuis(&self.algebra, &self.j1, 1),
            nijenhuis(&self.algebra, &self.j2, 1),
            nijenhuis(&self.algebra, &self.j3, -1),
        ]
    }

    pub fn integrable(&self) -> bool {
        self.nijenhuis_all().iter().all(Tensor::is_zero)
    }

    /// The three Lee forms, one per member structure, by the delta route.
    pub fn lee_forms(&self, lc: &Connection) -> [Tensor; 3] {
        let mk = |j: &Endo, cube: i64| {
            let f = fundamental_form(&self.metric, j);
            let nf = crate::geometry::cov_deriv(lc, &f);
            lee_form_delta_route(&self.metric, j, &nf, cube)
        };
        [mk(&self.j1, 1), mk(&self.j2, 1), mk(&self.j3, -1)]
    }
}

/// Residual of the Nijenhuis relation
/// 2 N_a(X,Y) = N_b(JcX, JcY) - Jc N_b(JcX, Y) - Jc N_b(X, JcY) - Jc^2 N_b(X,Y)
///            + N_c(JbX, JbY) - Jb N_c(JbX, Y) - Jb N_c(X, JbY) - Jb^2 N_c(X,Y)
/// for all three cyclic labelings in par1 order; zero unconditionally.
pub fn nuij_residuals(t: &ParaTriple) -> [Tensor; 3] {
    let [a1, a2, a3] = t.par1_members();
    let n1 = nijenhuis(&t.algebra, a1, 1);
    let n2 = nijenhuis(&t.algebra, a2, 1);
    let n3 = nijenhuis(&t.algebra, a3, -1);
    [
        nuij_one(t, &n1, (&n2, a2, 1), (&n3, a3, -1)),
        nuij_one(t, &n2, (&n3, a3, -1), (&n1, a1, 1)),
        nuij_one(t, &n3, (&n1, a1, 1), (&n2, a2, 1)),
    ]
}

fn nuij_one(
    t: &ParaTriple,
    na: &Tensor,
    (nb, jb, sqb): (&Tensor, &Endo, i64),
    (nc, jc, sqc): (&Tensor, &Endo, i64),
) -> Tensor {
    let n = t.algebra.n;
    let params = t.params().clone();
    let mut out = Tensor::zeros(&params, n, 3);
    let term = |nn: &Tensor, jg: &Endo, sq: i64, x: usize, y: usize, k: usize| -> Scalar {
        // N(JgX, JgY) - Jg N(JgX, Y) - Jg N(X, JgY) - Jg^2 N(X,Y) at output k
        let mut acc = Scalar::zero(&params);
        for p in 0..n {
            for q in 0..n {
                let c = &(jg.get(p, x) * jg.get(q, y)) * nn.get(&[p, q, k]);
                acc = acc + &c;
            }
        }
        for m in 0..n {
            let jkm = jg.get(k, m);
            if jkm.is_zero() {
                continue;
            }
            let mut inner = Scalar::zero(&params);
            for p in 0..n {
                inner = inner + &(jg.get(p, x) * nn.get(&[p, y, m]));
                inner = inner + &(jg.get(p, y) * nn.get(&[x, p, m]));
            }
            acc = acc - &(jkm * &inner);
        }
        acc - &(&Scalar::int(&params, sq) * nn.get(&[x, y, k]))
    };
    for x in 0..n {
        for y in 0..n {
            for k in 0..n {
                let rhs = &term(nb, jc, sqc, x, y, k) + &term(nc, jb, sqb, x, y, k);
                let two_na = &Scalar::int(&params, 2) * na.get(&[x, y, k]);
                out.set(&[x, y, k], &two_na - &rhs);
            }
        }
    }
    out
}

/// Connection 1-forms of the Levi-Civita connection in par1 labels:
/// D A1 = -w3 (x) A2 + w2 (x) A3, D A2 = w3 (x) A1 + w1 (x) A3,
/// D A3 = w2 (x) A1 + w1 (x) A2, solved by traces and verified exactly.
pub struct OmegaForms {
    pub w1: Tensor,
    pub w2: Tensor,
    pub w3: Tensor,
}

pub fn omega_forms(t: &ParaTriple, lc: &Connection) -> Result<OmegaForms, TripleError> {
    let [a1, a2, a3] = t.par1_members();
    let n = t.algebra.n;
    let params = t.params().clone();
    let na1 = nabla_endo(lc, a1);
    let na2 = nabla_endo(lc, a2);
    let na3 = nabla_endo(lc, a3);
    let qtr = Scalar::constant(&params, ratq(-1, 4));
    let mut w1 = Tensor::zeros(&params, n, 1);
    let mut w2 = Tensor::zeros(&params, n, 1);
    let mut w3 = Tensor::zeros(&params, n, 1);
    for a in 0..n {
        // tr((nab_a A1) A2) = -4 w3(a); tr((nab_a A1) A3) = -4 w2(a);
        // tr((nab_a A2) A3) = -4 w1(a)
        w3.set(&[a], &na1[a].compose(a2).trace() * &qtr);
        w2.set(&[a], &na1[a].compose(a3).trace() * &qtr);
        w1.set(&[a], &na2[a].compose(a3).trace() * &qtr);
    }
    // verify all three equations exactly
    for a in 0..n {
        let r1 = na1[a]
            .add(&a2.scale(w3.get(&[a])))
            .sub(&a3.scale(w2.get(&[a])));
        let r2 = na2[a]
            .sub(&a1.scale(w3.get(&[a])))
            .sub(&a3.scale(w1.get(&[a])));
        let r3 = na3[a]
            .sub(&a1.scale(w2.get(&[a])))
            .sub(&a2.scale(w1.get(&[a])));
        if !r1.is_zero() || !r2.is_zero() || !r3.is_zero() {
            return Err(TripleError::UnsolvableOmega);
        }
    }
    Ok(OmegaForms { w1, w2, w3 })
}

/// (J a)(X) = -a(JX) for 1-forms.
pub fn j_one_form(a: &Tensor, j: &Endo) -> Tensor {
    a.apply_endo(0, j).neg()
}

/// The B-forms of the Nijenhuis relation, B_a = w_b - J_a^3 w_c in par1
/// labels, with J^3 = J for product members and -J for the complex one.
pub fn nnn_b_forms(t: &ParaTriple, om: &OmegaForms) -> [Tensor; 3] {
    let [a1, a2, a3] = t.par1_members();
    let cube = |a: &Tensor, j: &Endo, sign: i64| {
        let v = j_one_form(a, j);
        if sign > 0 {
            v
        } else {
            v.neg()
        }
    };
    [
        om.w2.sub(&cube(&om.w3, a1, 1)),
        om.w3.sub(&cube(&om.w1, a2, 1)),
        om.w1.sub(&cube(&om.w2, a3, -1)),
    ]
}

/// Residual of 4 N_a(X,Y) = -B_a(X) J_b Y + B_a(Y) J_b X
///                          - (J_a B_a)(X) J_c Y + (J_a B_a)(Y) J_c X
/// (the display carries the unnormalized Nijenhuis tensor; with the
/// 1/4-normalized N of this crate the left side is 4N).
pub fn nnn_residuals(t: &ParaTriple, om: &OmegaForms) -> [Tensor; 3] {
    let [a1, a2, a3] = t.par1_members();
    let n1 = nijenhuis(&t.algebra, a1, 1);
    let n2 = nijenhuis(&t.algebra, a2, 1);
    let n3 = nijenhuis(&t.algebra, a3, -1);
    let bs = nnn_b_forms(t, om);
    [
        nnn_one(t, &n1, &bs[0], a1, 1, a2, a3),
        nnn_one(t, &n2, &bs[1], a2, 1, a3, a1),
        nnn_one(t, &n3, &bs[2], a3, -1, a1, a2),
    ]
}

fn nnn_one(
    t: &ParaTriple,
    na: &Tensor,
    ba: &Tensor,
    ja: &Endo,
    cube_sign: i64,
    jb: &Endo,
    jc: &Endo,
) -> Tensor {
    let n = t.algebra.n;
    let params = t.params().clone();
    let _ = cube_sign;
    // the J_a B_a slot is a single J action (the cube only enters B_a itself)
    let jab = j_one_form(ba, ja);
    let mut out = Tensor::zeros(&params, n, 3);
    let four = Scalar::int(&params, 4);
    for x in 0..n {
        for y in 0..n {
            for k in 0..n {
                let rhs = &(&(-ba.get(&[x])) * jb.get(k, y))
                    + &(ba.get(&[y]) * jb.get(k, x))
                    - &(jab.get(&[x]) * jc.get(k, y))
                    + &(jab.get(&[y]) * jc.get(k, x));
                out.set(&[x, y, k], &(&four * na.get(&[x, y, k])) - &rhs);
            }
        }
    }
    out
}

/// Residuals of the Lee-difference identities in this crate's Lee-form sign
/// convention: A1(th2 - th1) + B3, A2(th2 - th3) + B1, A3(th3 - th1) + B2
/// (the printed identities carry the opposite Lee sign).
pub fn lee_difference_b_residuals(
    t: &ParaTriple,
    lc: &Connection,
    om: &OmegaForms,
) -> [Tensor; 3] {
    let [a1, a2, a3] = t.par1_members();
    let [th_j1, th_j2, th_j3] = t.lee_forms(lc);
    let (ta1, ta2, ta3) = (th_j2, th_j1, th_j3);
    let bs = nnn_b_forms(t, om);
    let d21 = ta2.sub(&ta1);
    let d23 = ta2.sub(&ta3);
    let d31 = ta3.sub(&ta1);
    [
        j_one_form(&d21, a1).add(&bs[2]),
        j_one_form(&d23, a2).add(&bs[0]),
        j_one_form(&d31, a3).add(&bs[1]),
    ]
}

/// The Lee-form identities in par1 labels, with the sign convention of this
/// crate's Lee form: theta_{A1} = +A2 w2 - A3 w3, theta_{A2} = -A1 w1 - A3 w3,
/// theta_{A3} = +A2 w2 - A1 w1. Returns the three residuals.
pub fn mlq_lee_residuals(t: &ParaTriple, lc: &Connection, om: &OmegaForms) -> [Tensor; 3] {
    let [a1, a2, a3] = t.par1_members();
    let [th_j1, th_j2, th_j3] = t.lee_forms(lc);
    // member order: theta of A1 = theta of J2, of A2 = theta of J1
    let (ta1, ta2, ta3) = (th_j2, th_j1, th_j3);
    let a1w1 = j_one_form(&om.w1, a1);
    let a2w2 = j_one_form(&om.w2, a2);
    let a3w3 = j_one_form(&om.w3, a3);
    [
        ta1.sub(&a2w2.sub(&a3w3)),
        ta2.sub(&a1w1.neg().sub(&a3w3)),
        ta3.sub(&a2w2.sub(&a1w1)),
    ]
}

/// Common-Lee-form report: the three Lee forms, the integrability flag, and
/// the Lemma-style equivalence (integrable <=> Lee forms all equal).
pub struct CommonLee {
    pub thetas: [Tensor; 3],
    pub integrable: bool,
    pub lee_forms_equal: bool,
}

pub fn common_lee(t: &ParaTriple, lc: &Connection) -> CommonLee {
    let thetas = t.lee_forms(lc);
    let integrable = t.integrable();
    let eq01 = thetas[0].sub(&thetas[1]).is_zero();
    let eq02 = thetas[0].sub(&thetas[2]).is_zero();
    CommonLee { thetas, integrable, lee_forms_equal: eq01 && eq02 }
}

/// The shared Bismut connection of an integrable triple, with its
/// parallelism suite and the star-torsion sign table.
pub struct BismutCommon {
    pub conn: Connection,
    /// the skew torsion 3-form such that nab^b = nab^g + 1/2 T
    pub torsion3: Tensor,
    /// signs s_a with *theta = s_a (theta o J_a) ^ F_a, a = 1, 2, 3
    pub star_sign_table: [i8; 3],
    pub preserves_g: bool,
    pub preserves_j: [bool; 3],
    pub phi1_parallel: bool,
}

pub fn bismut_common(
    t: &ParaTriple,
    s: &Structure,
    lc: &Connection,
) -> Result<BismutCommon, TripleError> {
    if !t.integrable() {
        return Err(TripleError::NotIntegrable);
    }
    let params = t.params().clone();
    let theta = &s.theta;
    // star of theta with the validated orientation
    let star_theta = s.star.apply1(&s.metric, theta);
    // wedge expressions (theta o J_a) ^ F_a per member J1, J2, J3
    let members = [(&t.j1, 1i64), (&t.j2, 1), (&t.j3, -1)];
    let mut signs = [0i8; 3];
    let mut wedges = Vec::new();
    for (i, (j, _)) in members.iter().enumerate() {
        let f_a = fundamental_form(&t.metric, j);
        let th_j = theta.apply_endo(0, j); // (theta o J)(X) = theta(JX)
        let w = wedge(&th_j, &f_a);
        if w.is_zero() && star_theta.is_zero() {
            // vanishing Lee form: the sign is indeterminate
            signs[i] = 0;
        } else if star_theta.sub(&w).is_zero() {
            signs[i] = 1;
        } else if star_theta.add(&w).is_zero() {
            signs[i] = -1;
        } else {
            signs[i] = 0;
        }
        wedges.push(w);
    }
    // the Bismut torsion is the member-independent 3-form (theta o J1) ^ F1
    // (equal to (d^a F) of each member structure); the connection
    // nab^g + 1/2 T preserves g and every J_a, verified below.
    let t3 = wedges[0].clone();
    let half = Scalar::constant(&params, ratq(1, 2));
    let a = t3.scale(&half);
    let conn = lc.add_potential(&t.metric, &a);
    let preserves_g = a.is_two_form_valued();
    let preserves_j = [
        nabla_endo(&conn, &t.j1).iter().all(Endo::is_zero),
        nabla_endo(&conn, &t.j2).iter().all(Endo::is_zero),
        nabla_endo(&conn, &t.j3).iter().all(Endo::is_zero),
    ];
    // Phi1 = F2 + F3 parallel
    let f2 = fundamental_form(&t.metric, &t.j2);
    let f3 = fundamental_form(&t.metric, &t.j3);
    let phi1 = f2.add(&f3);
    let phi1_parallel = crate::geometry::cov_deriv(&conn, &phi1).is_zero();
    Ok(BismutCommon {
        conn,
        torsion3: t3,
        star_sign_table: signs,
        preserves_g,
        preserves_j,
        phi1_parallel,
    })
}

/// Anti-self-duality certificate: W+ of the attached metric vanishes.
pub fn asd_certificate(t: &ParaTriple, s: &Structure) -> Result<bool, TripleError> {
    if !t.integrable() {
        return Err(TripleError::NotIntegrable);
    }
    let r4 = curvature(&t.algebra, &s.lc, &t.metric);
    let (rho, sc) = crate::geometry::ricci_scalar(&r4, &t.metric);
    let w = crate::geometry::weyl(&r4, &rho, &sc, &t.metric);
    let split = crate::geometry::weyl_split(&w, &t.metric, &s.star);
    Ok(split.w_plus.is_zero())
}

/// Conformal flattening: apply the invariant conformal gauge with the
/// common Lee form and report curvature, torsion and J-parallelism.
pub struct FlattenReport {
    pub conn: Connection,
    pub curvature_zero: bool,
    pub torsion_zero: bool,
    pub preserves_j: [bool; 3],
}

pub fn flatten(t: &ParaTriple, s: &Structure, lc: &Connection) -> Result<FlattenReport, TripleError> {
    let theta = &s.theta;
    if !t.algebra.d_invariant(theta).is_zero() {
        return Err(TripleError::Geom(GeomError::NotClosed));
    }
    let conn = conformal_gauge(&t.algebra, &t.metric, lc, theta)?;
    let r4 = curvature(&t.algebra, &conn, &t.metric);
    let tor = torsion(&t.algebra, &conn, &t.metric);
    let preserves_j = [
        nabla_endo(&conn, &t.j1).iter().all(Endo::is_zero),
        nabla_endo(&conn, &t.j2).iter().all(Endo::is_zero),
        nabla_endo(&conn, &t.j3).iter().all(Endo::is_zero),
    ];
    Ok(FlattenReport {
        conn,
        curvature_zero: r4.is_zero(),
        torsion_zero: tor.is_zero(),
        preserves_j,
    })
}

/// Lowered Nijenhuis tensor of the primary member, for callers that need it.
pub fn n_lowered(t: &ParaTriple) -> Tensor {
    lower_first(&t.metric, &nijenhuis(&t.algebra, &t.j1, 1))
}
