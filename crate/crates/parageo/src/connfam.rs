//! ParaHermitian connections: the general constructor from torsion data
//! (psi+, B_b), the canonical one-parameter family nab^t with its Bismut and
//! Chern endpoints, the torsion identities, and the Ricci-type tensors of a
//! connection together with r^{-1} = r^1 + d(P theta).

use crate::exact::{ratq, Scalar};
use crate::frame::{bianchi, form_split_pm, involution_in, type_split, Endo, Tensor};
use crate::geometry::{curvature, nabla_endo, torsion, Connection};
use crate::paraherm::Structure;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConnError {
    #[error("invalid torsion data: {0}")]
    InvalidTorsionData(String),
}

/// Torsion data of Thm-style constructor: a (1,2)+(2,1) 3-form psi+ and a
/// (1,1) B-tensor with Bi(B_b) = 0.
pub struct TorsionData {
    pub psi_plus: Tensor,
    pub b_b: Tensor,
}

impl TorsionData {
    pub fn validate(&self, p: &Endo) -> Result<(), ConnError> {
        if !self.psi_plus.is_antisymmetric() {
            return Err(ConnError::InvalidTorsionData("psi+ is not a 3-form".into()));
        }
        let (_, minus) = form_split_pm(&self.psi_plus, p);
        if !minus.is_zero() {
            return Err(ConnError::InvalidTorsionData(
                "psi+ has a nonzero (3,0)+(0,3) part".into(),
            ));
        }
        if !self.b_b.is_two_form_valued() {
            return Err(ConnError::InvalidTorsionData("B_b is not 2-form valued".into()));
        }
        let (b11, b02, b20) = type_split(&self.b_b, p);
        let _ = b11;
        if !b02.is_zero() || !b20.is_zero() {
            return Err(ConnError::InvalidTorsionData("B_b is not of type (1,1)".into()));
        }
        if !bianchi(&self.b_b).is_zero() {
            return Err(ConnError::InvalidTorsionData("Bi(B_b) != 0".into()));
        }
        Ok(())
    }
}

/// A metric, P-preserving connection together with its torsion and
/// potential in the lowered B-tensor pairing.
pub struct HermitianConnection {
    pub conn: Connection,
    /// T(X;Y,Z) = g(X, T(Y,Z))
    pub torsion: Tensor,
    /// A(X;Y,Z) = g(nab_X Y - nab^g_X Y, Z)
    pub potential: Tensor,
    /// the family parameter when the connection is canonical
    pub t: Option<Scalar>,
}

impl HermitianConnection {
    fn build(s: &Structure, potential: Tensor, t: Option<Scalar>) -> HermitianConnection {
        let conn = s.lc.add_potential(&s.metric, &potential);
        let tors = torsion(&s.algebra, &conn, &s.metric);
        HermitianConnection { conn, torsion: tors, potential, t }
    }

    /// nab g = 0 and nab P = 0, checked exactly.
    pub fn preserves_structure(&self, s: &Structure) -> (bool, bool) {
        // metric parallelism: potential antisymmetric in the last two slots
        let metric_ok = self.potential.is_two_form_valued();
        let p_ok = nabla_endo(&self.conn, &s.p).iter().all(Endo::is_zero);
        (metric_ok, p_ok)
    }
}

/// Torsion prescribed by the general constructor:
/// T = -N - 1/8 (daF)+ - 3/8 In (daF)+ + 9/8 psi+ + 3/8 In psi+ + B_b.
pub fn prescribed_torsion(s: &Structure, data: &TorsionData) -> Tensor {
    let params = s.params().clone();
    let in_daf = involution_in(&s.da_f_plus, &s.p);
    let in_psi = involution_in(&data.psi_plus, &s.p);
    let c = |n: i64, d: i64| Scalar::constant(&params, ratq(n, d));
    s.n_low
        .neg()
        .sub(&s.da_f_plus.scale(&c(1, 8)))
        .sub(&in_daf.scale(&c(3, 8)))
        .add(&data.psi_plus.scale(&c(9, 8)))
        .add(&in_psi.scale(&c(3, 8)))
        .add(&data.b_b)
}

/// Unique paraHermitian connection with the prescribed torsion, via the
/// potential A = -T + 3/2 Bi(T).
pub fn connection_from_torsion_data(
    s: &Structure,
    data: &TorsionData,
) -> Result<HermitianConnection, ConnError> {
    data.validate(&s.p)?;
    let t = prescribed_torsion(s, data);
    Ok(connection_from_torsion(s, &t))
}

/// Connection determined by a torsion B-tensor through eq. A = -T + 3/2 Bi(T).
pub fn connection_from_torsion(s: &Structure, t: &Tensor) -> HermitianConnection {
    let params = s.params().clone();
    let a = t.neg().add(&bianchi(t).scale(&Scalar::constant(&params, ratq(3, 2))));
    HermitianConnection::build(s, a, None)
}

/// The canonical connection nab^t, with potential
/// A^t(X;Y,Z) = 1/2 (nabF)(X;PY,Z) - t/4 [(daF)+(X,Y,Z) - (daF)+(X,PY,PZ)].
pub fn canonical(s: &Structure, t: &Scalar) -> HermitianConnection {
    let params = s.params().clone();
    let half = Scalar::constant(&params, ratq(1, 2));
    let quarter_t = t * &Scalar::constant(&params, ratq(1, 4));
    let nf_p = s.nabla_f.apply_endo(1, &s.p);
    let daf_pp = s.da_f_plus.apply_endo(1, &s.p).apply_endo(2, &s.p);
    let a = nf_p.scale(&half).sub(&s.da_f_plus.sub(&daf_pp).scale(&quarter_t));
    let mut hc = HermitianConnection::build(s, a, Some(t.clone()));
    hc.t = Some(t.clone());
    hc
}

/// The torsion the canonical family must have:
/// T^t = -N - (3t-1)/4 (daF)+ - (t+1)/4 In (daF)+.
pub fn canonical_torsion_formula(s: &Structure, t: &Scalar) -> Tensor {
    let params = s.params().clone();
    let quarter = Scalar::constant(&params, ratq(1, 4));
    let three = Scalar::int(&params, 3);
    let one = Scalar::one(&params);
    let c1 = &(&(&three * t) - &one) * &quarter;
    let c2 = &(t + &one) * &quarter;
    let in_daf = involution_in(&s.da_f_plus, &s.p);
    s.n_low.neg().sub(&s.da_f_plus.scale(&c1)).sub(&in_daf.scale(&c2))
}

/// Ricci-type tensors of a connection on an almost paraHermitian structure.
pub struct RicciForms {
    /// rho(X,Y) = sum_i eps_i R(e_i, X, Y, e_i)
    pub rho: Tensor,
    /// rho*(X,Y) = sum_i eps_i R(e_i, X, PY, P e_i)
    pub rho_star: Tensor,
    /// r(X,Y) = -1/2 sum_i eps_i R(X, Y, e_i, P e_i)
    pub r: Tensor,
    pub s: Scalar,
    pub s_star: Scalar,
    /// tau = tr_g r, the full contraction sum_i eps_i r(e_i, P e_i)
    pub tau: Scalar,
}

/// All six Ricci-type quantities by metric contraction (frame-free).
pub fn ricci_forms(s: &Structure, conn: &Connection) -> RicciForms {
    let r4 = curvature(&s.algebra, conn, &s.metric);
    ricci_forms_of_curvature(s, &r4)
}

pub fn ricci_forms_of_curvature(s: &Structure, r4: &Tensor) -> RicciForms {
    let n = s.algebra.n;
    let params = s.params().clone();
    let g = &s.metric;
    let p = &s.p;
    let mut rho = Tensor::zeros(&params, n, 2);
    let mut rho_star = Tensor::zeros(&params, n, 2);
    let mut r = Tensor::zeros(&params, n, 2);
    let mhalf = Scalar::constant(&params, ratq(-1, 2));
    for x in 0..n {
        for y in 0..n {
            let mut acc = Scalar::zero(&params);
            let mut acc_star = Scalar::zero(&params);
            let mut acc_r = Scalar::zero(&params);
            for a in 0..n {
                for b in 0..n {
                    let gi = g.inv_at(a, b);
                    if gi.is_zero() {
                        continue;
                    }
                    acc = acc + &(gi * r4.get(&[a, x, y, b]));
                    for m in 0..n {
                        let pm_y = p.get(m, y);
                        if !pm_y.is_zero() {
                            for q in 0..n {
                                let pq_b = p.get(q, b);
                                if !pq_b.is_zero() {
                                    acc_star = acc_star
                                        + &(&(&(gi * pm_y) * pq_b) * r4.get(&[a, x, m, q]));
                                }
                            }
                        }
                        let pm_b = p.get(m, b);
                        if !pm_b.is_zero() {
                            acc_r = acc_r + &(&(gi * pm_b) * r4.get(&[x, y, a, m]));
                        }
                    }
                }
            }
            rho.set(&[x, y], acc);
            rho_star.set(&[x, y], acc_star);
            r.set(&[x, y], &acc_r * &mhalf);
        }
    }
    let trace = |t: &Tensor| {
        let mut acc = Scalar::zero(&params);
        for x in 0..n {
            for y in 0..n {
                let gi = g.inv_at(x, y);
                if !gi.is_zero() {
                    acc = acc + &(gi * t.get(&[x, y]));
                }
            }
        }
        acc
    };
    let s_sc = trace(&rho);
    let s_star = trace(&rho_star);
    // tau = g^{ab} r(a, m) P^m_b : the full contraction against F
    let mut tau = Scalar::zero(&params);
    for a in 0..n {
        for b in 0..n {
            let gi = g.inv_at(a, b);
            if gi.is_zero() {
                continue;
            }
            for m in 0..n {
                let pm = p.get(m, b);
                if !pm.is_zero() {
                    tau = tau + &(&(gi * pm) * r.get(&[a, m]));
                }
            }
        }
    }
    RicciForms { rho, rho_star, r, s: s_sc, s_star, tau }
}

/// The 1-form P theta, with the convention (P a)(X) = -a(PX).
pub fn p_one_form(theta: &Tensor, p: &Endo) -> Tensor {
    theta.apply_endo(0, p).neg()
}

/// Basis of the admissible B_b space: (1,1)-type B-tensors with Bi(B) = 0,
/// solved as an exact nullspace over the rationals.
pub fn admissible_bb_basis(s: &Structure) -> Vec<Tensor> {
    let n = s.algebra.n;
    let params = s.params().clone();
    // coordinates: (x, y<z) -> column index
    let mut cols = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in (y + 1)..n {
                cols.push((x, y, z));
            }
        }
    }
    let from_coords = |v: &[Scalar]| -> Tensor {
        let mut b = Tensor::zeros(&params, n, 3);
        for (ci, &(x, y, z)) in cols.iter().enumerate() {
            b.set(&[x, y, z], v[ci].clone());
            b.set(&[x, z, y], -&v[ci]);
        }
        b
    };
    // constraint rows: per output slot of B02, B20, Bi(B)
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (ci, _) in cols.iter().enumerate() {
        let mut unit = vec![Scalar::zero(&params); cols.len()];
        unit[ci] = Scalar::one(&params);
        let b = from_coords(&unit);
        let (_, b02, b20) = type_split(&b, &s.p);
        let bi = bianchi(&b);
        let mut entries = Vec::new();
        for idx in b.indices() {
            entries.push(b02.get(&idx).clone());
        }
        for idx in b.indices() {
            entries.push(b20.get(&idx).clone());
        }
        for idx in b.indices() {
            entries.push(bi.get(&idx).clone());
        }
        rows.push(entries);
    }
    // build the constraint matrix with columns = coordinates
    let nrows = rows[0].len();
    let mut m = crate::frame::Mat::zeros(&params, nrows, cols.len());
    for (ci, r) in rows.iter().enumerate() {
        for (ri, v) in r.iter().enumerate() {
            *m.at_mut(ri, ci) = v.clone();
        }
    }
    m.nullspace().into_iter().map(|v| from_coords(&v)).collect()
}
