//! Levi-Civita geometry on left-invariant data: Koszul solve, curvature,
//! Ricci and scalar curvature, the Weyl tensor with its self-dual and
//! anti-self-dual halves, covariant derivatives, the divergence of the Weyl
//! tensor by two independent routes, and the invariant conformal change.
//!
//! Curvature gauge (validated against the PHC5 anchor): R(X,Y)Z =
//! nab_X nab_Y Z - nab_Y nab_X Z - nab_[X,Y] Z, lowered as R(X,Y,Z,V) =
//! g(R(X,Y)Z, V).

use crate::exact::{ratq, ParamSet, Scalar};
use crate::frame::{Endo, FrameError, Mat, Metric, Star4, Tensor};
use crate::liealg::LieAlgebra;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("metric is degenerate")]
    DegenerateMetric,
    #[error("1-form is not closed")]
    NotClosed,
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// Connection coefficients on the frame: nab_{f_a} f_b = gamma[a][b][k] f_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub n: usize,
    pub gamma: Tensor,
}

impl Connection {
    pub fn params(&self) -> &Arc<ParamSet> {
        self.gamma.params()
    }

    pub fn zero(params: &Arc<ParamSet>, n: usize) -> Connection {
        Connection { n, gamma: Tensor::zeros(params, n, 3) }
    }

    /// nab_{f_a} v for a coefficient vector (invariant field).
    pub fn derive(&self, a: usize, v: &[Scalar]) -> Vec<Scalar> {
        let params = self.params().clone();
        let mut out = vec![Scalar::zero(&params); self.n];
        for b in 0..self.n {
            if v[b].is_zero() {
                continue;
            }
            for k in 0..self.n {
                let g = self.gamma.get(&[a, b, k]);
                if !g.is_zero() {
                    out[k] = &out[k] + &(&v[b] * g);
                }
            }
        }
        out
    }

    /// Connection obtained by adding a lowered potential A(X;Y,Z) =
    /// g(nab'_X Y - nab_X Y, Z) with first slot the direction.
    pub fn add_potential(&self, g: &Metric, a: &Tensor) -> Connection {
        assert_eq!(a.rank, 3);
        let params = self.params().clone();
        let mut gamma = self.gamma.clone();
        for x in 0..self.n {
            for y in 0..self.n {
                for k in 0..self.n {
                    let mut acc = Scalar::zero(&params);
                    for c in 0..self.n {
                        let av = a.get(&[x, y, c]);
                        if !av.is_zero() {
                            acc = acc + &(av * g.inv_at(c, k));
                        }
                    }
                    gamma.update(&[x, y, k], |old| old + &acc);
                }
            }
        }
        Connection { n: self.n, gamma }
    }

    /// Lowered potential of `self` relative to `base`.
    pub fn potential(&self, base: &Connection, g: &Metric) -> Tensor {
        let params = self.params().clone();
        let mut out = Tensor::zeros(&params, self.n, 3);
        for x in 0..self.n {
            for y in 0..self.n {
                for z in 0..self.n {
                    let mut acc = Scalar::zero(&params);
                    for m in 0..self.n {
                        let d = self.gamma.get(&[x, y, m]) - base.gamma.get(&[x, y, m]);
                        if !d.is_zero() {
                            acc = acc + &(&d * g.at(m, z));
                        }
                    }
                    out.set(&[x, y, z], acc);
                }
            }
        }
        out
    }
}

/// Levi-Civita connection by the invariant Koszul formula:
/// 2 g(nab_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y).
pub fn levi_civita(l: &LieAlgebra, g: &Metric) -> Result<Connection, GeomError> {
    if g.det.is_zero() {
        return Err(GeomError::DegenerateMetric);
    }
    let n = l.n;
    let params = l.params().clone();
    let half = Scalar::constant(&params, ratq(1, 2));
    let mut gamma = Tensor::zeros(&params, n, 3);
    for a in 0..n {
        for b in 0..n {
            // lowered Koszul values
            let mut low = vec![Scalar::zero(&params); n];
            for c in 0..n {
                let mut acc = Scalar::zero(&params);
                for m in 0..n {
                    acc = acc + &(l.c.get(&[a, b, m]) * g.at(m, c));
                    acc = acc - &(l.c.get(&[b, c, m]) * g.at(m, a));
                    acc = acc + &(l.c.get(&[c, a, m]) * g.at(m, b));
                }
                low[c] = &acc * &half;
            }
            for k in 0..n {
                let mut acc = Scalar::zero(&params);
                for c in 0..n {
                    if !low[c].is_zero() {
                        acc = acc + &(&low[c] * g.inv_at(c, k));
                    }
                }
                gamma.set(&[a, b, k], acc);
            }
        }
    }
    Ok(Connection { n, gamma })
}

/// Independent assembly of the same connection: solve the linear system
/// 2 g(nab_a b, .) = K_{ab.} column by column with the exact matrix inverse.
/// Used as the cross-check path against `levi_civita`.
pub fn levi_civita_linear_solve(l: &LieAlgebra, g: &Metric) -> Result<Connection, GeomError> {
    if g.det.is_zero() {
        return Err(GeomError::DegenerateMetric);
    }
    let n = l.n;
    let params = l.params().clone();
    let ginv_t = {
        // solve g x = rhs via the inverse transpose path to stay independent
        // of the contraction order in `levi_civita`
        let gm = g.g.clone();
        gm.inverse().map_err(|_| GeomError::DegenerateMetric)?
    };
    let half = Scalar::constant(&params, ratq(1, 2));
    let mut gamma = Tensor::zeros(&params, n, 3);
    for a in 0..n {
        for b in 0..n {
            let mut rhs = Mat::zeros(&params, n, 1);
            for c in 0..n {
                let mut acc = Scalar::zero(&params);
                for m in 0..n {
                    acc = acc + &(l.c.get(&[a, b, m]) * g.at(m, c));
                    acc = acc - &(l.c.get(&[b, c, m]) * g.at(m, a));
                    acc = acc + &(l.c.get(&[c, a, m]) * g.at(m, b));
                }
                *rhs.at_mut(c, 0) = &acc * &half;
            }
            let sol = ginv_t.mul(&rhs);
            for k in 0..n {
                gamma.set(&[a, b, k], sol.at(k, 0).clone());
            }
        }
    }
    Ok(Connection { n, gamma })
}

/// Lowered torsion as a B-tensor: T(X;Y,Z) = g(X, T(Y,Z)).
pub fn torsion(l: &LieAlgebra, conn: &Connection, g: &Metric) -> Tensor {
    let n = l.n;
    let params = l.params().clone();
    let mut out = Tensor::zeros(&params, n, 3);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut acc = Scalar::zero(&params);
                for m in 0..n {
                    let t = &(conn.gamma.get(&[y, z, m]) - conn.gamma.get(&[z, y, m]))
                        - l.c.get(&[y, z, m]);
                    if !t.is_zero() {
                        acc = acc + &(g.at(x, m) * &t);
                    }
                }
                out.set(&[x, y, z], acc);
            }
        }
    }
    out
}

/// Lowered curvature tensor R(X,Y,Z,V) = g(R(X,Y)Z, V).
pub fn curvature(l: &LieAlgebra, conn: &Connection, g: &Metric) -> Tensor {
    let n = l.n;
    let params = l.params().clone();
    let mut up = Tensor::zeros(&params, n, 4);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    let mut acc = Scalar::zero(&params);
                    for m in 0..n {
                        acc = acc
                            + &(conn.gamma.get(&[b, c, m]) * conn.gamma.get(&[a, m, e]))
                            - &(conn.gamma.get(&[a, c, m]) * conn.gamma.get(&[b, m, e]))
                            - &(l.c.get(&[a, b, m]) * conn.gamma.get(&[m, c, e]));
                    }
                    up.set(&[a, b, c, e], acc);
                }
            }
        }
    }
    let mut low = Tensor::zeros(&params, n, 4);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut acc = Scalar::zero(&params);
                    for e in 0..n {
                        let u = up.get(&[a, b, c, e]);
                        if !u.is_zero() {
                            acc = acc + &(u * g.at(e, d));
                        }
                    }
                    low.set(&[a, b, c, d], acc);
                }
            }
        }
    }
    low
}

/// Ricci tensor rho(X,Y) = g^{ab} R(a,X,Y,b) and scalar s = tr_g rho.
pub fn ricci_scalar(r: &Tensor, g: &Metric) -> (Tensor, Scalar) {
    let n = r.n;
    let params = r.params().clone();
    let mut rho = Tensor::zeros(&params, n, 2);
    for x in 0..n {
        for y in 0..n {
            let mut acc = Scalar::zero(&params);
            for a in 0..n {
                for b in 0..n {
                    let gi = g.inv_at(a, b);
                    if !gi.is_zero() {
                        acc = acc + &(gi * r.get(&[a, x, y, b]));
                    }
                }
            }
            rho.set(&[x, y], acc);
        }
    }
    let mut s = Scalar::zero(&params);
    for x in 0..n {
        for y in 0..n {
            let gi = g.inv_at(x, y);
            if !gi.is_zero() {
                s = s + &(gi * rho.get(&[x, y]));
            }
        }
    }
    (rho, s)
}

/// The Weyl tensor from the normalized Ricci tensor h = -1/2 (rho - s/6 g):
/// W = R - h(X,Z)g(Y,V) + h(Y,Z)g(X,V) - h(Y,V)g(X,Z) + h(X,V)g(Y,Z).
pub fn weyl(r: &Tensor, rho: &Tensor, s: &Scalar, g: &Metric) -> Tensor {
    let n = r.n;
    let params = r.params().clone();
    let mhalf = Scalar::constant(&params, ratq(-1, 2));
    let sixth = Scalar::constant(&params, ratq(1, 6));
    let mut h = Tensor::zeros(&params, n, 2);
    for i in 0..n {
        for j in 0..n {
            let v = rho.get(&[i, j]) - &(&(s * &sixth) * g.at(i, j));
            h.set(&[i, j], &v * &mhalf);
        }
    }
    let mut w = Tensor::zeros(&params, n, 4);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for v in 0..n {
                    let val = r.get(&[x, y, z, v])
                        - &(h.get(&[x, z]) * g.at(y, v))
                        + &(h.get(&[y, z]) * g.at(x, v))
                        - &(h.get(&[y, v]) * g.at(x, z))
                        + &(h.get(&[x, v]) * g.at(y, z));
                    w.set(&[x, y, z, v], val);
                }
            }
        }
    }
    w
}

/// Matrix of a pair-symmetric curvature-type tensor acting on 2-forms:
/// (K om)_{ab} = 1/2 K_{abcd} om^{cd}, in the (i<j) basis.
pub fn op_on_two_forms(k: &Tensor, g: &Metric) -> Mat {
    let bas = crate::frame::two_form_basis(4);
    let params = k.params().clone();
    let mut m = Mat::zeros(&params, 6, 6);
    for (col, &(c, d)) in bas.iter().enumerate() {
        for (row, &(a, b)) in bas.iter().enumerate() {
            let mut acc = Scalar::zero(&params);
            for p in 0..4 {
                for q in 0..4 {
                    // om^{pq} for om = e^c ^ e^d
                    let up = &(g.inv_at(p, c) * g.inv_at(q, d)) - &(g.inv_at(p, d) * g.inv_at(q, c));
                    if !up.is_zero() {
                        acc = acc + &(&up * k.get(&[a, b, p, q]));
                    }
                }
            }
            *m.at_mut(row, col) = &acc * &Scalar::constant(&params, ratq(1, 2));
        }
    }
    m
}

/// Rebuild the (0,4) tensor of an operator on 2-forms (inverse of
/// `op_on_two_forms` for operators with antisymmetric-pair tensors).
pub fn tensor_of_op(op: &Mat, g: &Metric) -> Tensor {
    let bas = crate::frame::two_form_basis(4);
    let params = op.params().clone();
    let mut out = Tensor::zeros(&params, 4, 4);
    for &(c, d) in &bas {
        // lowered dual form: om_{pq} = g_{pc} g_{qd} - g_{pd} g_{qc}
        let mut coeffs = Mat::zeros(&params, 6, 1);
        for (row, &(p, q)) in bas.iter().enumerate() {
            *coeffs.at_mut(row, 0) = &(g.at(p, c) * g.at(q, d)) - &(g.at(p, d) * g.at(q, c));
        }
        let img = op.mul(&coeffs);
        for (row, &(a, b)) in bas.iter().enumerate() {
            let v = img.at(row, 0).clone();
            out.set(&[a, b, c, d], v.clone());
            out.set(&[b, a, c, d], -&v);
            out.set(&[a, b, d, c], -&v);
            out.set(&[b, a, d, c], v);
        }
    }
    out
}

/// Self-dual and anti-self-dual parts of the Weyl tensor in dimension 4.
pub struct WeylSplit {
    pub w: Tensor,
    pub w_plus: Tensor,
    pub w_minus: Tensor,
    pub w_plus_op: Mat,
    pub w_minus_op: Mat,
}

pub fn weyl_split(w: &Tensor, g: &Metric, star: &Star4) -> WeylSplit {
    let params = w.params().clone();
    let half = Scalar::constant(&params, ratq(1, 2));
    let wop = op_on_two_forms(w, g);
    let id = Mat::identity(&params, 6);
    let scale = |m: &Mat, c: &Scalar| -> Mat {
        let mut out = m.clone();
        for v in &mut out.data {
            *v = &*v * c;
        }
        out
    };
    let madd = |a: &Mat, b: &Mat| -> Mat {
        let mut out = a.clone();
        for (v, w) in out.data.iter_mut().zip(&b.data) {
            *v = &*v + w;
        }
        out
    };
    let msub = |a: &Mat, b: &Mat| -> Mat {
        let mut out = a.clone();
        for (v, w) in out.data.iter_mut().zip(&b.data) {
            *v = &*v - w;
        }
        out
    };
    let pp = scale(&madd(&id, &star.s2), &half);
    let pm = scale(&msub(&id, &star.s2), &half);
    let wp = pp.mul(&wop).mul(&pp);
    let wm = pm.mul(&wop).mul(&pm);
    WeylSplit {
        w: w.clone(),
        w_plus: tensor_of_op(&wp, g),
        w_minus: tensor_of_op(&wm, g),
        w_plus_op: wp,
        w_minus_op: wm,
    }
}

/// Covariant derivative of a fully covariant invariant tensor; the new
/// first slot is the direction: (nab T)(a; i1..ir) = -sum_s Gamma T.
pub fn cov_deriv(conn: &Connection, t: &Tensor) -> Tensor {
    let n = t.n;
    let params = t.params().clone();
    let mut out = Tensor::zeros(&params, n, t.rank + 1);
    for idx in out.indices() {
        let a = idx[0];
        let rest = &idx[1..];
        let mut acc = Scalar::zero(&params);
        for slot in 0..t.rank {
            for m in 0..n {
                let gam = conn.gamma.get(&[a, rest[slot], m]);
                if gam.is_zero() {
                    continue;
                }
                let mut sub: Vec<usize> = rest.to_vec();
                sub[slot] = m;
                acc = acc - &(gam * t.get(&sub));
            }
        }
        out.set(&idx, acc);
    }
    out
}

/// Covariant derivative of an endomorphism: returns (nab_a J) as an Endo per
/// direction a.
pub fn nabla_endo(conn: &Connection, j: &Endo) -> Vec<Endo> {
    let n = j.n;
    let params = j.params().clone();
    let mut out = Vec::with_capacity(n);
    for a in 0..n {
        let mut e = Endo::zeros(&params, n);
        for b in 0..n {
            for k in 0..n {
                let mut acc = Scalar::zero(&params);
                for m in 0..n {
                    acc = acc + &(j.get(m, b) * conn.gamma.get(&[a, m, k]));
                    acc = acc - &(conn.gamma.get(&[a, b, m]) * j.get(k, m));
                }
                e.set(k, b, acc);
            }
        }
        out.push(e);
    }
    out
}

/// Direct divergence of a curvature-type tensor:
/// (div K)(X;Y,Z) = g^{ab} (nab_a K)(b, X, Y, Z).
pub fn divergence(conn: &Connection, k: &Tensor, g: &Metric) -> Tensor {
    let nk = cov_deriv(conn, k);
    let n = k.n;
    let params = k.params().clone();
    let mut out = Tensor::zeros(&params, n, 3);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut acc = Scalar::zero(&params);
                for a in 0..n {
                    for b in 0..n {
                        let gi = g.inv_at(a, b);
                        if !gi.is_zero() {
                            acc = acc + &(gi * nk.get(&[a, b, x, y, z]));
                        }
                    }
                }
                out.set(&[x, y, z], acc);
            }
        }
    }
    out
}

/// Second-Bianchi form of the Weyl divergence:
/// (div W)(X;Y,Z) = (nab_Y h)(Z,X) - (nab_Z h)(Y,X), h = -1/2(rho - s/6 g).
pub fn divergence_weyl_bianchi(
    conn: &Connection,
    rho: &Tensor,
    s: &Scalar,
    g: &Metric,
) -> Tensor {
    let n = rho.n;
    let params = rho.params().clone();
    let mhalf = Scalar::constant(&params, ratq(-1, 2));
    let sixth = Scalar::constant(&params, ratq(1, 6));
    let mut h = Tensor::zeros(&params, n, 2);
    for i in 0..n {
        for j in 0..n {
            let v = rho.get(&[i, j]) - &(&(s * &sixth) * g.at(i, j));
            h.set(&[i, j], &v * &mhalf);
        }
    }
    let nh = cov_deriv(conn, &h);
    let mut out = Tensor::zeros(&params, n, 3);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                out.set(&[x, y, z], nh.get(&[y, z, x]) - nh.get(&[z, y, x]));
            }
        }
    }
    out
}

/// Invariant conformal gauge for a closed 1-form:
/// 2 nab'_A B = 2 nab_A B - th(A) B - th(B) A + g(A,B) th^sharp.
pub fn conformal_gauge(
    l: &LieAlgebra,
    g: &Metric,
    lc: &Connection,
    theta: &Tensor,
) -> Result<Connection, GeomError> {
    assert_eq!(theta.rank, 1);
    if !l.d_invariant(theta).is_zero() {
        return Err(GeomError::NotClosed);
    }
    let n = l.n;
    let params = l.params().clone();
    let half = Scalar::constant(&params, ratq(1, 2));
    let mut sharp = vec![Scalar::zero(&params); n];
    for k in 0..n {
        for m in 0..n {
            sharp[k] = &sharp[k] + &(g.inv_at(m, k) * theta.get(&[m]));
        }
    }
    let mut gamma = lc.gamma.clone();
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let mut corr = Scalar::zero(&params);
                if b == k {
                    corr = corr - theta.get(&[a]);
                }
                if a == k {
                    corr = corr - theta.get(&[b]);
                }
                corr = corr + &(g.at(a, b) * &sharp[k]);
                gamma.update(&[a, b, k], |old| old + &(&corr * &half));
            }
        }
    }
    Ok(Connection { n, gamma })
}
