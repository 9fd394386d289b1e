//! Almost paraHermitian structure analysis: validation, Nijenhuis tensor,
//! fundamental form, Lee form by its two defining formulas, the covariant
//! derivative of F by two routes, and classification flags over the
//! function field.

use crate::exact::{rat, ratq, ParamSet, Scalar};
use crate::frame::{form_split_pm, type_split, Endo, Metric, Star4, Tensor};
use crate::geometry::{cov_deriv, levi_civita, Connection, GeomError};
use crate::liealg::LieAlgebra;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructError {
    #[error("structure validation failed: {0}")]
    Validation(String),
    #[error("no adapted orthonormal frame could be built: {0}")]
    FrameNotAdapted(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Frame(#[from] crate::frame::FrameError),
}

/// Diagnostics from validating an almost paraHermitian pair (g, P).
#[derive(Debug, Clone)]
pub struct StructureDiagnostics {
    pub squares_to_one: bool,
    pub trace_free: bool,
    pub skew_compatible: bool,
    /// First failing witness (index pair and residual) when a check fails.
    pub witness: Option<(usize, usize, Scalar)>,
}

impl StructureDiagnostics {
    pub fn pass(&self) -> bool {
        self.squares_to_one && self.trace_free && self.skew_compatible
    }
}

/// Check P^2 = 1, tr P = 0 and g(PX,Y) + g(X,PY) = 0.
pub fn validate_structure(g: &Metric, p: &Endo) -> StructureDiagnostics {
    let n = p.n;
    let params = p.params().clone();
    let one = Endo::identity(&params, n);
    let sq = p.compose(p).sub(&one);
    let squares_to_one = sq.is_zero();
    let trace_free = p.trace().is_zero();
    let mut witness = None;
    let mut skew_compatible = true;
    'outer: for x in 0..n {
        for y in 0..n {
            // g(P f_x, f_y) + g(f_x, P f_y)
            let mut acc = Scalar::zero(&params);
            for m in 0..n {
                acc = acc + &(p.get(m, x) * g.at(m, y)) + &(p.get(m, y) * g.at(x, m));
            }
            if !acc.is_zero() {
                skew_compatible = false;
                witness = Some((x, y, acc));
                break 'outer;
            }
        }
    }
    if witness.is_none() {
        if let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| !sq.get(i, j).is_zero())
        {
            witness = Some((i, j, sq.get(i, j).clone()));
        }
    }
    StructureDiagnostics { squares_to_one, trace_free, skew_compatible, witness }
}

/// Nijenhuis tensor of an endomorphism with J^2 = square (+1 or -1):
/// 4N(X,Y) = [JX,JY] + J^2 [X,Y] - J[JX,Y] - J[X,JY], vector-valued.
pub fn nijenhuis(l: &LieAlgebra, j: &Endo, square: i64) -> Tensor {
    let n = l.n;
    let params = l.params().clone();
    let quarter = Scalar::constant(&params, ratq(1, 4));
    let sq = Scalar::int(&params, square);
    let mut out = Tensor::zeros(&params, n, 3);
    let basis: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| if k == i { Scalar::one(&params) } else { Scalar::zero(&params) })
                .collect()
        })
        .collect();
    for x in 0..n {
        for y in 0..n {
            let jx: Vec<Scalar> = (0..n).map(|k| j.get(k, x).clone()).collect();
            let jy: Vec<Scalar> = (0..n).map(|k| j.get(k, y).clone()).collect();
            let mut v = l.bracket(&jx, &jy);
            let bxy = l.bracket(&basis[x], &basis[y]);
            for k in 0..n {
                v[k] = &v[k] + &(&sq * &bxy[k]);
            }
            let t1 = j.apply(&l.bracket(&jx, &basis[y]));
            let t2 = j.apply(&l.bracket(&basis[x], &jy));
            for k in 0..n {
                v[k] = &(&v[k] - &t1[k]) - &t2[k];
                out.set(&[x, y, k], &v[k] * &quarter);
            }
        }
    }
    out
}

/// Lower a vector-valued 2-form into the B-tensor pairing
/// B(X;Y,Z) = g(X, B(Y,Z)).
pub fn lower_first(g: &Metric, bv: &Tensor) -> Tensor {
    let n = bv.n;
    let params = bv.params().clone();
    let mut out = Tensor::zeros(&params, n, 3);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut acc = Scalar::zero(&params);
                for m in 0..n {
                    let v = bv.get(&[y, z, m]);
                    if !v.is_zero() {
                        acc = acc + &(g.at(x, m) * v);
                    }
                }
                out.set(&[x, y, z], acc);
            }
        }
    }
    out
}

/// Trit-valued classification over the function field: a defining tensor
/// either vanishes identically, never vanishes (nonzero constants), or
/// vanishes on a parameter subvariety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flag {
    Holds,
    Fails,
    ParamDependent(Vec<Scalar>),
}

impl Flag {
    fn from_tensors(ts: &[&Tensor]) -> Flag {
        let mut nonconst = Vec::new();
        let mut any_nonzero = false;
        for t in ts {
            for idx in t.indices() {
                let v = t.get(&idx);
                if !v.is_zero() {
                    any_nonzero = true;
                    if v.as_rational().is_none() {
                        nonconst.push(v.clone());
                    }
                }
            }
        }
        if !any_nonzero {
            Flag::Holds
        } else if nonconst.is_empty() {
            Flag::Fails
        } else {
            nonconst.sort_by_key(|s| s.to_string());
            nonconst.dedup();
            Flag::ParamDependent(nonconst)
        }
    }

    pub fn holds(&self) -> bool {
        matches!(self, Flag::Holds)
    }
}

#[derive(Debug, Clone)]
pub struct ClassFlags {
    pub para_kaehler: Flag,
    pub para_hermitian: Flag,
    pub nearly_para_kaehler: Flag,
    /// The pure identity (nab_X P) X = 0, reported separately from the
    /// nearly-paraKähler flag (which also requires "not paraKähler").
    pub npk_identity: Flag,
    pub almost_para_kaehler: Flag,
    pub quasi_para_kaehler: Flag,
    pub locally_conformally_para_kaehler: Flag,
}

/// An almost paraHermitian structure with its derived cache.
pub struct Structure {
    pub algebra: LieAlgebra,
    pub metric: Metric,
    pub p: Endo,
    pub orientation: i8,
    pub lc: Connection,
    /// F(X,Y) = g(X, PY)
    pub f: Tensor,
    /// Nijenhuis tensor, vector-valued ([x][y][k]) and lowered (B-tensor)
    pub n_vec: Tensor,
    pub n_low: Tensor,
    pub theta: Tensor,
    pub d_f: Tensor,
    pub d_theta: Tensor,
    /// (nab^g F)(X; Y, Z)
    pub nabla_f: Tensor,
    /// d^a F (X,Y,Z) = -dF(PX, PY, PZ)
    pub da_f: Tensor,
    pub da_f_plus: Tensor,
    pub da_f_minus: Tensor,
    pub star: Star4,
}

impl Structure {
    pub fn params(&self) -> &Arc<ParamSet> {
        self.algebra.params()
    }

    /// Build the cache for (L, g, P); requires a valid structure. The
    /// orientation sign is chosen so that *F = +F, and recorded.
    pub fn new(algebra: LieAlgebra, metric: Metric, p: Endo) -> Result<Structure, StructError> {
        let diag = validate_structure(&metric, &p);
        if !diag.pass() {
            return Err(StructError::Validation(format!(
                "P^2=1: {}, trace-free: {}, compatible: {} (witness {:?})",
                diag.squares_to_one, diag.trace_free, diag.skew_compatible, diag.witness
            )));
        }
        let lc = levi_civita(&algebra, &metric)?;
        let f = fundamental_form(&metric, &p);
        let n_vec = nijenhuis(&algebra, &p, 1);
        let n_low = lower_first(&metric, &n_vec);
        let d_f = algebra.d_invariant(&f);
        let nabla_f = cov_deriv(&lc, &f);
        let theta = lee_form_df_route(&metric, &p, &d_f);
        let d_theta = algebra.d_invariant(&theta);
        let da_f = twisted_da_f(&d_f, &p);
        let (da_f_plus, da_f_minus) = form_split_pm(&da_f, &p);
        // orientation: require *F = +F; flip once if needed, record
        let mut orientation = 1i8;
        let star_try = Star4::new(&metric, orientation)?;
        let star = if star_try.plus_part(&f) == f {
            star_try
        } else {
            orientation = -1;
            let s = Star4::new(&metric, orientation)?;
            if s.plus_part(&f) != f {
                return Err(StructError::Validation(
                    "fundamental form is not self-dual under either orientation".into(),
                ));
            }
            s
        };
        Ok(Structure {
            algebra,
            metric,
            p,
            orientation,
            lc,
            f,
            n_vec,
            n_low,
            theta,
            d_theta,
            d_f,
            nabla_f,
            da_f,
            da_f_plus,
            da_f_minus,
            star,
        })
    }

    /// Lee form by the delta-route, asserted equal to the cached dF-route
    /// value: theta(X) = -(delta F)(P^3 X) with delta F(Y) =
    /// -g^{ab} (nab_a F)(b, Y); P^3 = P here.
    pub fn lee_form_delta_route(&self) -> Tensor {
        lee_form_delta_route(&self.metric, &self.p, &self.nabla_f, 1)
    }

    /// (nab F) via the df1 route:
    /// 2 (nab F)(X;Y,Z) = dF(X,Y,Z) + dF(X,PY,PZ) + 4 N(PX;Y,Z).
    pub fn nabla_f_df1_route(&self) -> Tensor {
        let n = self.algebra.n;
        let params = self.params().clone();
        let half = Scalar::constant(&params, ratq(1, 2));
        let d_fp = self.d_f.apply_endo(1, &self.p).apply_endo(2, &self.p);
        let np = self.n_low.apply_endo(0, &self.p);
        let four = Scalar::int(&params, 4);
        let mut out = Tensor::zeros(&params, n, 3);
        for idx in out.indices() {
            let v = self.d_f.get(&idx) + d_fp.get(&idx);
            let v = &v + &(&four * np.get(&idx));
            out.set(&idx, &v * &half);
        }
        out
    }

    /// Classification flags, each decided by exact vanishing of its
    /// defining tensor over the function field.
    pub fn classify(&self) -> ClassFlags {
        let params = self.params().clone();
        let n = self.algebra.n;
        // symmetrized nabla F: (nab_X F)(Y,Z) + (nab_Y F)(X,Z)
        let mut sym = Tensor::zeros(&params, n, 3);
        for idx in sym.indices() {
            let v = self.nabla_f.get(&idx) + self.nabla_f.get(&[idx[1], idx[0], idx[2]]);
            sym.set(&idx, v);
        }
        let para_kaehler = Flag::from_tensors(&[&self.nabla_f]);
        let para_hermitian = Flag::from_tensors(&[&self.n_low]);
        let npk_identity = Flag::from_tensors(&[&sym]);
        let almost_para_kaehler = Flag::from_tensors(&[&self.d_f]);
        let (d_f_plus, _) = form_split_pm(&self.d_f, &self.p);
        let quasi_para_kaehler = Flag::from_tensors(&[&d_f_plus]);
        // dF - theta ^ F together with d theta
        let tw = crate::liealg::wedge(&self.theta, &self.f);
        let lck_tensor = self.d_f.sub(&tw);
        let locally_conformally_para_kaehler =
            Flag::from_tensors(&[&lck_tensor, &self.d_theta, &self.n_low]);
        // nearly paraKähler = identity holds AND not paraKähler
        let nearly_para_kaehler = match (&npk_identity, &para_kaehler) {
            (Flag::Holds, Flag::Fails) => Flag::Holds,
            (Flag::Holds, Flag::ParamDependent(v)) => Flag::ParamDependent(v.clone()),
            (Flag::Holds, Flag::Holds) => Flag::Fails,
            (other, _) => other.clone(),
        };
        ClassFlags {
            para_kaehler,
            para_hermitian,
            nearly_para_kaehler,
            npk_identity,
            almost_para_kaehler,
            quasi_para_kaehler,
            locally_conformally_para_kaehler,
        }
    }

    /// An orthonormal frame adapted to P: (e1, e2, Pe1, Pe2) with epsilons
    /// (+,+,-,-). Errors when unit-norm seeds cannot be found over the
    /// rationals.
    pub fn adapted_frame(&self) -> Result<Vec<Vec<Scalar>>, StructError> {
        let n = self.algebra.n;
        let params = self.params().clone();
        if n != 4 {
            return Err(StructError::FrameNotAdapted("only implemented for n = 4".into()));
        }
        let one = Scalar::one(&params);
        let basis: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| if k == i { one.clone() } else { Scalar::zero(&params) })
                    .collect()
            })
            .collect();
        // first unit vector among candidates
        let mut candidates: Vec<Vec<Scalar>> = basis.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let mut v = basis[i].clone();
                for k in 0..n {
                    v[k] = &v[k] + &basis[j][k];
                }
                candidates.push(v);
            }
        }
        let e1 = candidates
            .iter()
            .find(|v| (&self.metric.pair(v, v) - &one).is_zero())
            .cloned()
            .ok_or_else(|| StructError::FrameNotAdapted("no unit vector found".into()))?;
        let pe1 = self.p.apply(&e1);
        // candidate e2: unit norm, orthogonal to e1 and P e1
        let e2 = candidates
            .iter()
            .find(|v| {
                (&self.metric.pair(v, v) - &one).is_zero()
                    && self.metric.pair(v, &e1).is_zero()
                    && self.metric.pair(v, &pe1).is_zero()
            })
            .cloned()
            .ok_or_else(|| StructError::FrameNotAdapted("no second unit vector found".into()))?;
        let pe2 = self.p.apply(&e2);
        Ok(vec![e1, e2, pe1, pe2])
    }

    /// Lee form evaluated in an explicit orthonormal adapted frame by the
    /// epsilon-weighted sum theta(X) = sum_{i=1..n} dF(e_i, P e_i, X);
    /// cross-checks the metric-contraction route.
    pub fn lee_form_adapted_frame(&self) -> Result<Tensor, StructError> {
        let frame = self.adapted_frame()?;
        let n = self.algebra.n;
        let params = self.params().clone();
        let mut out = Tensor::zeros(&params, n, 1);
        for x in 0..n {
            let mut acc = Scalar::zero(&params);
            for half in 0..n / 2 {
                let e = &frame[half];
                let pe = self.p.apply(e);
                // dF(e, Pe, f_x)
                for a in 0..n {
                    for b in 0..n {
                        let c = &e[a] * &pe[b];
                        if !c.is_zero() {
                            acc = acc + &(&c * self.d_f.get(&[a, b, x]));
                        }
                    }
                }
            }
            out.set(&[x], acc);
        }
        Ok(out)
    }
}

/// F(X,Y) = g(X, PY).
pub fn fundamental_form(g: &Metric, p: &Endo) -> Tensor {
    let n = p.n;
    let params = p.params().clone();
    let mut f = Tensor::zeros(&params, n, 2);
    for x in 0..n {
        for y in 0..n {
            let mut acc = Scalar::zero(&params);
            for m in 0..n {
                let v = p.get(m, y);
                if !v.is_zero() {
                    acc = acc + &(g.at(x, m) * v);
                }
            }
            f.set(&[x, y], acc);
        }
    }
    f
}

/// d^a F(X,Y,Z) = -dF(PX,PY,PZ).
pub fn twisted_da_f(d_f: &Tensor, p: &Endo) -> Tensor {
    d_f.apply_endo(0, p).apply_endo(1, p).apply_endo(2, p).neg()
}

/// theta(X) = 1/2 sum_i eps_i dF(e_i, P e_i, X), computed frame-free as
/// 1/2 dF_{pqx} P^q_m g^{pm}.
pub fn lee_form_df_route(g: &Metric, p: &Endo, d_f: &Tensor) -> Tensor {
    let n = p.n;
    let params = p.params().clone();
    let half = Scalar::constant(&params, ratq(1, 2));
    let mut out = Tensor::zeros(&params, n, 1);
    for x in 0..n {
        let mut acc = Scalar::zero(&params);
        for pp in 0..n {
            for q in 0..n {
                let d = d_f.get(&[pp, q, x]);
                if d.is_zero() {
                    continue;
                }
                for m in 0..n {
                    let c = &(p.get(q, m) * g.inv_at(pp, m)) * d;
                    acc = acc + &c;
                }
            }
        }
        out.set(&[x], &acc * &half);
    }
    out
}

/// theta(X) = -(delta F)(J^3 X), delta F(Y) = -g^{ab}(nab_a F)(b, Y).
/// `cube_sign` is +1 for product structures (J^3 = J) and -1 for complex
/// ones (J^3 = -J).
pub fn lee_form_delta_route(g: &Metric, j: &Endo, nabla_f: &Tensor, cube_sign: i64) -> Tensor {
    let n = j.n;
    let params = j.params().clone();
    let mut delta_f = vec![Scalar::zero(&params); n];
    for y in 0..n {
        let mut acc = Scalar::zero(&params);
        for a in 0..n {
            for b in 0..n {
                let gi = g.inv_at(a, b);
                if !gi.is_zero() {
                    acc = acc + &(gi * nabla_f.get(&[a, b, y]));
                }
            }
        }
        delta_f[y] = -&acc;
    }
    let sign = Scalar::constant(&params, rat(-cube_sign));
    let mut out = Tensor::zeros(&params, n, 1);
    for x in 0..n {
        let mut acc = Scalar::zero(&params);
        for m in 0..n {
            let jm = j.get(m, x);
            if !jm.is_zero() {
                acc = acc + &(&delta_f[m] * jm);
            }
        }
        out.set(&[x], &acc * &sign);
    }
    out
}

/// Componentwise check of the defining relations of the three type parts;
/// used as the independent oracle for `type_split`.
pub fn type_part_relations_hold(b: &Tensor, p: &Endo) -> (bool, bool, bool) {
    let (b11, b02, b20) = type_split(b, p);
    // (1,1): B(x; Py, Pz) = -B(x; y, z)
    let r11 = b11.apply_endo(1, p).apply_endo(2, p).add(&b11).is_zero();
    // (0,2): B(w; Py, z) = B(Pw; y, z)
    let r02 = b02.apply_endo(1, p).sub(&b02.apply_endo(0, p)).is_zero();
    // (2,0): B(w; Py, z) = -B(Pw; y, z)
    let r20 = b20.apply_endo(1, p).add(&b20.apply_endo(0, p)).is_zero();
    (r11, r02, r20)
}
