//! Multilinear algebra over an n-dimensional frame: dense covariant tensors
//! of exact scalars, endomorphisms, the (1,1)/(2,0)/(0,2) type decomposition,
//! the Bianchi projector, the involution In, the ± split of 3-forms and the
//! Hodge machinery for neutral metrics in dimension four.
//!
//! Index convention: a "B-tensor" stores B(X;Y,Z) = g(X, B(Y,Z)) as a rank-3
//! covariant array antisymmetric in the last two slots, exactly the pairing
//! the torsion and potential formulas use.

use crate::exact::{ExactError, ParamSet, Scalar};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrameError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("metric is not neutral of signature (2,2)")]
    WrongSignature,
    #[error("volume normalization: {0}")]
    Volume(#[from] ExactError),
}

/// Dense fully covariant tensor with Scalar entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    pub n: usize,
    pub rank: usize,
    data: Vec<Scalar>,
}

impl Tensor {
    pub fn zeros(params: &Arc<ParamSet>, n: usize, rank: usize) -> Tensor {
        Tensor { n, rank, data: vec![Scalar::zero(params); n.pow(rank as u32)] }
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        self.data[0].params()
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank);
        let mut o = 0;
        for &i in idx {
            debug_assert!(i < self.n);
            o = o * self.n + i;
        }
        o
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Scalar) {
        let o = self.offset(idx);
        self.data[o] = v;
    }

    pub fn update(&mut self, idx: &[usize], f: impl FnOnce(&Scalar) -> Scalar) {
        let o = self.offset(idx);
        self.data[o] = f(&self.data[o]);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!((self.n, self.rank), (other.n, other.rank));
        Tensor {
            n: self.n,
            rank: self.rank,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        assert_eq!((self.n, self.rank), (other.n, other.rank));
        Tensor {
            n: self.n,
            rank: self.rank,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Tensor {
        Tensor { n: self.n, rank: self.rank, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        Tensor { n: self.n, rank: self.rank, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// Iterate all index tuples of this tensor's rank.
    pub fn indices(&self) -> IndexIter {
        IndexIter::new(self.n, self.rank)
    }

    /// Apply an endomorphism to one slot: out(.., i, ..) = sum_m M[m][i] T(.., m, ..).
    pub fn apply_endo(&self, slot: usize, m: &Endo) -> Tensor {
        assert!(slot < self.rank);
        let mut out = Tensor::zeros(self.params(), self.n, self.rank);
        for idx in self.indices() {
            let target = idx[slot];
            let mut acc = Scalar::zero(self.params());
            let mut idx2 = idx.clone();
            for mm in 0..self.n {
                idx2[slot] = mm;
                let c = m.get(mm, target);
                if !c.is_zero() {
                    acc = acc + &(self.get(&idx2) * c);
                }
            }
            out.set(&idx, acc);
        }
        out
    }

    /// Full antisymmetry check across all slots.
    pub fn is_antisymmetric(&self) -> bool {
        if self.rank < 2 {
            return true;
        }
        for idx in self.indices() {
            for a in 0..self.rank {
                for b in (a + 1)..self.rank {
                    let mut sw = idx.clone();
                    sw.swap(a, b);
                    if (self.get(&idx) + self.get(&sw)).is_zero() == false {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Substitute parameters in every entry.
    pub fn substitute(&self, env: &crate::exact::ParamEnv) -> Result<Tensor, ExactError> {
        let mut data = Vec::with_capacity(self.data.len());
        for s in &self.data {
            data.push(s.substitute(env)?);
        }
        Ok(Tensor { n: self.n, rank: self.rank, data })
    }

    /// Antisymmetry in the last two slots (the B-tensor invariant).
    pub fn is_two_form_valued(&self) -> bool {
        assert!(self.rank >= 2);
        for idx in self.indices() {
            let mut sw = idx.clone();
            sw.swap(self.rank - 2, self.rank - 1);
            if !(self.get(&idx) + self.get(&sw)).is_zero() {
                return false;
            }
        }
        true
    }
}

pub struct IndexIter {
    n: usize,
    rank: usize,
    cur: Option<Vec<usize>>,
}

impl IndexIter {
    pub fn new(n: usize, rank: usize) -> Self {
        IndexIter { n, rank, cur: Some(vec![0; rank]) }
    }
}

impl Iterator for IndexIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.cur.take()?;
        let mut next = cur.clone();
        for i in (0..self.rank).rev() {
            next[i] += 1;
            if next[i] < self.n {
                self.cur = Some(next);
                return Some(cur);
            }
            next[i] = 0;
        }
        if self.rank == 0 {
            self.cur = None;
            return Some(cur);
        }
        Some(cur)
    }
}

/// Frame endomorphism: `m[i][j]` is the f_i-coefficient of J(f_j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endo {
    pub n: usize,
    m: Vec<Scalar>,
}

impl Endo {
    pub fn zeros(params: &Arc<ParamSet>, n: usize) -> Endo {
        Endo { n, m: vec![Scalar::zero(params); n * n] }
    }

    pub fn identity(params: &Arc<ParamSet>, n: usize) -> Endo {
        let mut e = Self::zeros(params, n);
        for i in 0..n {
            e.set(i, i, Scalar::one(params));
        }
        e
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        self.m[0].params()
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.m[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.m[i * self.n + j] = v;
    }

    pub fn compose(&self, other: &Endo) -> Endo {
        let mut out = Endo::zeros(self.params(), self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = Scalar::zero(self.params());
                for k in 0..self.n {
                    acc = acc + &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Endo) -> Endo {
        let mut out = self.clone();
        for i in 0..self.n * self.n {
            out.m[i] = &out.m[i] + &other.m[i];
        }
        out
    }

    pub fn sub(&self, other: &Endo) -> Endo {
        let mut out = self.clone();
        for i in 0..self.n * self.n {
            out.m[i] = &out.m[i] - &other.m[i];
        }
        out
    }

    pub fn neg(&self) -> Endo {
        Endo { n: self.n, m: self.m.iter().map(|v| -v).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Endo {
        Endo { n: self.n, m: self.m.iter().map(|v| v * c).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(Scalar::is_zero)
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero(self.params());
        for i in 0..self.n {
            acc = acc + self.get(i, i);
        }
        acc
    }

    /// Apply to a coefficient vector: out_i = sum_j m[i][j] v_j.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.n)
            .map(|i| {
                let mut acc = Scalar::zero(self.params());
                for j in 0..self.n {
                    acc = acc + &(self.get(i, j) * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn from_mat(m: Mat) -> Endo {
        assert_eq!(m.rows, m.cols);
        Endo { n: m.rows, m: m.data }
    }

    pub fn substitute(&self, env: &crate::exact::ParamEnv) -> Result<Endo, ExactError> {
        let mut m = Vec::with_capacity(self.m.len());
        for s in &self.m {
            m.push(s.substitute(env)?);
        }
        Ok(Endo { n: self.n, m })
    }

    pub fn to_mat(&self) -> Mat {
        Mat { rows: self.n, cols: self.n, data: self.m.clone() }
    }
}

/// Small exact matrix for frame changes and linear solves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(params: &Arc<ParamSet>, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Scalar::zero(params); rows * cols] }
    }

    pub fn identity(params: &Arc<ParamSet>, n: usize) -> Mat {
        let mut m = Self::zeros(params, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one(params);
        }
        m
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        self.data[0].params()
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.params(), self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero(self.params());
                for k in 0..self.cols {
                    acc = acc + &(self.at(i, k) * other.at(k, j));
                }
                *out.at_mut(i, j) = acc;
            }
        }
        out
    }

    /// Gauss-Jordan inverse over the function field.
    pub fn inverse(&self) -> Result<Mat, FrameError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let params = self.params().clone();
        let mut a = self.clone();
        let mut inv = Mat::identity(&params, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.at(r, col).is_zero())
                .ok_or(FrameError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a.at(pivot, j).clone();
                    *a.at_mut(pivot, j) = a.at(col, j).clone();
                    *a.at_mut(col, j) = tmp;
                    let tmp = inv.at(pivot, j).clone();
                    *inv.at_mut(pivot, j) = inv.at(col, j).clone();
                    *inv.at_mut(col, j) = tmp;
                }
            }
            let p = a.at(col, col).clone();
            let pinv = p.inv().map_err(|_| FrameError::Singular)?;
            for j in 0..n {
                *a.at_mut(col, j) = a.at(col, j) * &pinv;
                *inv.at_mut(col, j) = inv.at(col, j) * &pinv;
            }
            for r in 0..n {
                if r != col && !a.at(r, col).is_zero() {
                    let f = a.at(r, col).clone();
                    for j in 0..n {
                        *a.at_mut(r, j) = a.at(r, j) - &(&f * a.at(col, j));
                        *inv.at_mut(r, j) = inv.at(r, j) - &(&f * inv.at(col, j));
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let params = self.params().clone();
        let mut a = self.clone();
        let mut det = Scalar::one(&params);
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !a.at(r, col).is_zero()) {
                Some(p) => p,
                None => return Scalar::zero(&params),
            };
            if pivot != col {
                det = -det;
                for j in 0..n {
                    let tmp = a.at(pivot, j).clone();
                    *a.at_mut(pivot, j) = a.at(col, j).clone();
                    *a.at_mut(col, j) = tmp;
                }
            }
            let p = a.at(col, col).clone();
            det = &det * &p;
            for r in (col + 1)..n {
                if !a.at(r, col).is_zero() {
                    let f = a.at(r, col) / &p;
                    for j in col..n {
                        *a.at_mut(r, j) = a.at(r, j) - &(&f * a.at(col, j));
                    }
                }
            }
        }
        det
    }

    /// Nullspace basis (columns) of this matrix, by exact row reduction.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let params = self.params().clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
        let mut r = 0;
        for c in 0..cols {
            if r >= rows {
                break;
            }
            let piv = ((r)..rows).find(|&i| !a.at(i, c).is_zero());
            let Some(piv) = piv else { continue };
            if piv != r {
                for j in 0..cols {
                    let tmp = a.at(piv, j).clone();
                    *a.at_mut(piv, j) = a.at(r, j).clone();
                    *a.at_mut(r, j) = tmp;
                }
            }
            let p = a.at(r, c).clone();
            let pinv = p.inv().expect("nonzero pivot");
            for j in 0..cols {
                *a.at_mut(r, j) = a.at(r, j) * &pinv;
            }
            for i in 0..rows {
                if i != r && !a.at(i, c).is_zero() {
                    let f = a.at(i, c).clone();
                    for j in 0..cols {
                        *a.at_mut(i, j) = a.at(i, j) - &(&f * a.at(r, j));
                    }
                }
            }
            pivot_of_col[c] = Some(r);
            r += 1;
        }
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![Scalar::zero(&params); cols];
            v[free] = Scalar::one(&params);
            for c in 0..cols {
                if let Some(pr) = pivot_of_col[c] {
                    v[c] = -a.at(pr, free);
                }
            }
            basis.push(v);
        }
        basis
    }
}

// ---------------------------------------------------------------------------
// type decomposition, Bianchi projector, involution, 3-form split
// ---------------------------------------------------------------------------

/// Split a B-tensor (rank 3, antisymmetric in the last two slots) into its
/// (1,1), (0,2) and (2,0) parts with respect to a product structure P.
pub fn type_split(b: &Tensor, p: &Endo) -> (Tensor, Tensor, Tensor) {
    assert_eq!(b.rank, 3);
    let params = b.params().clone();
    let half = Scalar::constant(&params, crate::exact::ratq(1, 2));
    let quarter = Scalar::constant(&params, crate::exact::ratq(1, 4));
    let b_pp = b.apply_endo(1, p).apply_endo(2, p); // B(x; Py, Pz)
    let b_p1 = b.apply_endo(0, p).apply_endo(1, p); // B(Px; Py, z)
    let b_p2 = b.apply_endo(0, p).apply_endo(2, p); // B(Px; y, Pz)
    let b11 = b.sub(&b_pp).scale(&half);
    let b02 = b.add(&b_pp).add(&b_p1).add(&b_p2).scale(&quarter);
    let b20 = b.add(&b_pp).sub(&b_p1).sub(&b_p2).scale(&quarter);
    (b11, b02, b20)
}

/// Bianchi projector onto 3-forms: 3Bi(B)(X;Y,Z) = B(X;Y,Z)+B(Y;Z,X)+B(Z;X,Y).
pub fn bianchi(b: &Tensor) -> Tensor {
    assert_eq!(b.rank, 3);
    let params = b.params().clone();
    let third = Scalar::constant(&params, crate::exact::ratq(1, 3));
    let mut out = Tensor::zeros(&params, b.n, 3);
    for idx in b.indices() {
        let (x, y, z) = (idx[0], idx[1], idx[2]);
        let v = b.get(&[x, y, z]) + b.get(&[y, z, x]) + b.get(&[z, x, y]);
        out.set(&idx, &v * &third);
    }
    out
}

/// The involution In(B)(X;Y,Z) = B(X;PY,PZ).
pub fn involution_in(b: &Tensor, p: &Endo) -> Tensor {
    assert_eq!(b.rank, 3);
    b.apply_endo(1, p).apply_endo(2, p)
}

/// Split a 3-form into its (1,2)+(2,1) part psi+ and (3,0)+(0,3) part psi-.
pub fn form_split_pm(psi: &Tensor, p: &Endo) -> (Tensor, Tensor) {
    assert_eq!(psi.rank, 3);
    let params = psi.params().clone();
    let quarter = Scalar::constant(&params, crate::exact::ratq(1, 4));
    let three = Scalar::int(&params, 3);
    let s12 = psi.apply_endo(1, p).apply_endo(2, p);
    let s02 = psi.apply_endo(0, p).apply_endo(2, p);
    let s01 = psi.apply_endo(0, p).apply_endo(1, p);
    let plus = psi.scale(&three).sub(&s12).sub(&s02).sub(&s01).scale(&quarter);
    let minus = psi.add(&s12).add(&s02).add(&s01).scale(&quarter);
    (plus, minus)
}

// ---------------------------------------------------------------------------
// metric, two-form operators and Hodge star in dimension four
// ---------------------------------------------------------------------------

/// Symmetric nondegenerate metric on the frame with cached inverse.
#[derive(Debug, Clone)]
pub struct Metric {
    pub n: usize,
    pub g: Mat,
    pub ginv: Mat,
    pub det: Scalar,
}

impl Metric {
    pub fn new(g: Mat) -> Result<Metric, FrameError> {
        let n = g.rows;
        let det = g.det();
        if det.is_zero() {
            return Err(FrameError::Singular);
        }
        let ginv = g.inverse()?;
        Ok(Metric { n, g, ginv, det })
    }

    pub fn from_diag(params: &Arc<ParamSet>, diag: &[i64]) -> Metric {
        let n = diag.len();
        let mut g = Mat::zeros(params, n, n);
        for (i, &d) in diag.iter().enumerate() {
            *g.at_mut(i, i) = Scalar::int(params, d);
        }
        Metric::new(g).expect("diagonal metric must be nondegenerate")
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        self.g.params()
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        self.g.at(i, j)
    }

    pub fn inv_at(&self, i: usize, j: usize) -> &Scalar {
        self.ginv.at(i, j)
    }

    /// g(u, v) for coefficient vectors.
    pub fn pair(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero(self.params());
        for i in 0..self.n {
            for j in 0..self.n {
                if !u[i].is_zero() && !v[j].is_zero() {
                    acc = acc + &(&(&u[i] * &v[j]) * self.at(i, j));
                }
            }
        }
        acc
    }

    /// Raise the last slot of a covariant tensor into endomorphism shape is
    /// not needed; this contracts two covariant slots with g^{-1}.
    pub fn contract(&self, t: &Tensor, slot_a: usize, slot_b: usize) -> Tensor {
        assert!(slot_a < slot_b && slot_b < t.rank);
        let params = t.params().clone();
        let mut out = Tensor::zeros(&params, t.n, t.rank - 2);
        for idx in out.indices() {
            let mut acc = Scalar::zero(&params);
            for a in 0..t.n {
                for b in 0..t.n {
                    let gi = self.inv_at(a, b);
                    if gi.is_zero() {
                        continue;
                    }
                    let mut full = Vec::with_capacity(t.rank);
                    let mut it = idx.iter();
                    for s in 0..t.rank {
                        if s == slot_a {
                            full.push(a);
                        } else if s == slot_b {
                            full.push(b);
                        } else {
                            full.push(*it.next().unwrap());
                        }
                    }
                    acc = acc + &(t.get(&full) * gi);
                }
            }
            out.set(&idx, acc);
        }
        out
    }
}

/// Index pairs (i<j) giving the 2-form basis in dimension n.
pub fn two_form_basis(n: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            v.push((i, j));
        }
    }
    v
}

/// Inner product on 2-forms, normalized so the fundamental form of a
/// compatible product structure has square norm +2 in neutral signature:
/// <a, b> = -1/2 a_{ij} b^{ij}.
pub fn ip2(g: &Metric, a: &Tensor, b: &Tensor) -> Scalar {
    assert_eq!(a.rank, 2);
    assert_eq!(b.rank, 2);
    let params = a.params().clone();
    let mut acc = Scalar::zero(&params);
    for i in 0..a.n {
        for j in 0..a.n {
            for p in 0..a.n {
                for q in 0..a.n {
                    let c = &(g.inv_at(i, p) * g.inv_at(j, q)) * b.get(&[p, q]);
                    if !c.is_zero() {
                        acc = acc + &(a.get(&[i, j]) * &c);
                    }
                }
            }
        }
    }
    acc.scale_rat(crate::exact::ratq(-1, 2))
}

impl Scalar {
    fn scale_rat(&self, r: crate::exact::Rational) -> Scalar {
        self * &Scalar::constant(self.params(), r)
    }
}

/// Hodge-star data for an oriented neutral 4-metric. The orientation sign
/// multiplies the volume form of the declared frame order; catalog entries
/// fix it by requiring *F = +F.
pub struct Star4 {
    pub n: usize,
    /// 6x6 matrix of * on the 2-form basis.
    pub s2: Mat,
    vol: Scalar,
    orientation: i8,
}

impl Star4 {
    pub fn new(g: &Metric, orientation: i8) -> Result<Star4, FrameError> {
        if g.n != 4 {
            return Err(FrameError::DimensionMismatch("hodge star requires n = 4".into()));
        }
        // neutral signature has positive determinant
        let det = g.det.clone();
        if det
            .as_rational()
            .map_or(false, |r| r < crate::exact::rat(0))
        {
            return Err(FrameError::WrongSignature);
        }
        let vol = det.sqrt().map_err(FrameError::Volume)?;
        let vol = &vol * &Scalar::int(g.params(), orientation as i64);
        let bas = two_form_basis(4);
        let params = g.params().clone();
        let mut s2 = Mat::zeros(&params, 6, 6);
        for (col, &(c, d)) in bas.iter().enumerate() {
            // om = e^c ^ e^d ; (*om)_{ab} = 1/2 om^{pq} vol_{pqab}
            let mut om = Tensor::zeros(&params, 4, 2);
            om.set(&[c, d], Scalar::one(&params));
            om.set(&[d, c], -Scalar::one(&params));
            let so = star2_apply(g, &vol, &om);
            for (row, &(a, b)) in bas.iter().enumerate() {
                *s2.at_mut(row, col) = so.get(&[a, b]).clone();
            }
        }
        Ok(Star4 { n: 4, s2, vol, orientation })
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn apply2(&self, om: &Tensor) -> Tensor {
        let bas = two_form_basis(4);
        let params = om.params().clone();
        let mut out = Tensor::zeros(&params, 4, 2);
        for (row, &(a, b)) in bas.iter().enumerate() {
            let mut acc = Scalar::zero(&params);
            for (col, &(c, d)) in bas.iter().enumerate() {
                let coeff = self.s2.at(row, col);
                if !coeff.is_zero() {
                    acc = acc + &(coeff * om.get(&[c, d]));
                }
            }
            out.set(&[a, b], acc.clone());
            out.set(&[b, a], -acc);
        }
        out
    }

    /// Self-dual part of a 2-form.
    pub fn plus_part(&self, om: &Tensor) -> Tensor {
        let params = om.params().clone();
        let half = Scalar::constant(&params, crate::exact::ratq(1, 2));
        om.add(&self.apply2(om)).scale(&half)
    }

    /// Anti-self-dual part of a 2-form.
    pub fn minus_part(&self, om: &Tensor) -> Tensor {
        let params = om.params().clone();
        let half = Scalar::constant(&params, crate::exact::ratq(1, 2));
        om.sub(&self.apply2(om)).scale(&half)
    }

    /// Star of a 1-form: (*th)_{bcd} = th^a vol_{abcd}.
    pub fn apply1(&self, g: &Metric, th: &Tensor) -> Tensor {
        assert_eq!(th.rank, 1);
        let params = th.params().clone();
        let mut up = vec![Scalar::zero(&params); 4];
        for k in 0..4 {
            for m in 0..4 {
                up[k] = &up[k] + &(g.inv_at(m, k) * th.get(&[m]));
            }
        }
        let mut out = Tensor::zeros(&params, 4, 3);
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut acc = Scalar::zero(&params);
                    for a in 0..4 {
                        let s = perm_sign(&[a, b, c, d]);
                        if s != 0 {
                            let v = &up[a] * &self.vol;
                            acc = if s > 0 { acc + &v } else { acc - &v };
                        }
                    }
                    out.set(&[b, c, d], acc);
                }
            }
        }
        out
    }
}

fn star2_apply(g: &Metric, vol: &Scalar, om: &Tensor) -> Tensor {
    let params = om.params().clone();
    let mut up = Tensor::zeros(&params, 4, 2);
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = Scalar::zero(&params);
            for p in 0..4 {
                for q in 0..4 {
                    let c = &(g.inv_at(a, p) * g.inv_at(b, q)) * om.get(&[p, q]);
                    acc = acc + &c;
                }
            }
            up.set(&[a, b], acc);
        }
    }
    let half = Scalar::constant(&params, crate::exact::ratq(1, 2));
    let mut out = Tensor::zeros(&params, 4, 2);
    for c in 0..4 {
        for d in 0..4 {
            let mut acc = Scalar::zero(&params);
            for a in 0..4 {
                for b in 0..4 {
                    let s = perm_sign(&[a, b, c, d]);
                    if s != 0 {
                        let v = up.get(&[a, b]) * vol;
                        acc = if s > 0 { acc + &v } else { acc - &v };
                    }
                }
            }
            out.set(&[c, d], &acc * &half);
        }
    }
    out
}

/// Sign of the permutation (0123) -> idx, or 0 when indices repeat.
pub fn perm_sign(idx: &[usize]) -> i32 {
    let n = idx.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if idx[i] == idx[j] {
                return 0;
            }
        }
    }
    let mut sign = 1;
    for i in 0..n {
        for j in (i + 1)..n {
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}
