//! Lie algebras by structure constants, the Chevalley-Eilenberg differential
//! for left-invariant forms, the wedge product, the catalog of model
//! algebras, and the text format for user-supplied structures.

use crate::exact::{parse_scalar, ExactError, ParamEnv, ParamSet, Scalar};
use crate::frame::{Endo, Mat, Metric, Tensor};
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("catalog validation failed for `{entry}`: {reason}")]
    CatalogValidation { entry: String, reason: String },
    #[error("structure file error at line {line}: {msg}")]
    FileFormat { line: usize, msg: String },
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Frame(#[from] crate::frame::FrameError),
}

/// Finite-dimensional Lie algebra over the function field, described by its
/// structure constants on a fixed frame: [f_i, f_j] = c[i][j][k] f_k.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub n: usize,
    pub names: Vec<String>,
    /// rank-3 array, last slot is the output index; antisymmetric in (i,j).
    pub c: Tensor,
}

impl LieAlgebra {
    pub fn params(&self) -> &Arc<ParamSet> {
        self.c.params()
    }

    pub fn abelian(params: &Arc<ParamSet>, n: usize, names: &[&str]) -> LieAlgebra {
        LieAlgebra {
            n,
            names: names.iter().map(|s| s.to_string()).collect(),
            c: Tensor::zeros(params, n, 3),
        }
    }

    /// Bracket of two coefficient vectors.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let params = self.params().clone();
        let mut out = vec![Scalar::zero(&params); self.n];
        for i in 0..self.n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.n {
                if v[j].is_zero() {
                    continue;
                }
                let uv = &u[i] * &v[j];
                for k in 0..self.n {
                    let c = self.c.get(&[i, j, k]);
                    if !c.is_zero() {
                        out[k] = &out[k] + &(&uv * c);
                    }
                }
            }
        }
        out
    }

    /// Jacobi residual J[i][j][k][l] = sum_cyc c[i][j][m] c[m][k][l].
    pub fn jacobi_residual(&self) -> Tensor {
        let params = self.params().clone();
        let n = self.n;
        let mut out = Tensor::zeros(&params, n, 4);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut acc = Scalar::zero(&params);
                        for m in 0..n {
                            acc = acc
                                + &(self.c.get(&[i, j, m]) * self.c.get(&[m, k, l]))
                                + &(self.c.get(&[j, k, m]) * self.c.get(&[m, i, l]))
                                + &(self.c.get(&[k, i, m]) * self.c.get(&[m, j, l]));
                        }
                        out.set(&[i, j, k, l], acc);
                    }
                }
            }
        }
        out
    }

    pub fn substitute(&self, env: &ParamEnv) -> Result<LieAlgebra, ExactError> {
        Ok(LieAlgebra { n: self.n, names: self.names.clone(), c: self.c.substitute(env)? })
    }

    /// Chevalley-Eilenberg differential of an invariant p-form:
    /// dw(x0..xp) = sum_{i<j} (-1)^{i+j} w([x_i,x_j], ..no x_i.. ..no x_j..).
    pub fn d_invariant(&self, w: &Tensor) -> Tensor {
        let params = self.params().clone();
        let p = w.rank;
        let n = self.n;
        let mut out = Tensor::zeros(&params, n, p + 1);
        for idx in out.indices() {
            let mut acc = Scalar::zero(&params);
            for i in 0..=p {
                for j in (i + 1)..=p {
                    let mut rest: Vec<usize> = Vec::with_capacity(p.saturating_sub(1));
                    for (pos, &v) in idx.iter().enumerate() {
                        if pos != i && pos != j {
                            rest.push(v);
                        }
                    }
                    let mut term = Scalar::zero(&params);
                    for m in 0..n {
                        let c = self.c.get(&[idx[i], idx[j], m]);
                        if c.is_zero() {
                            continue;
                        }
                        let mut full = Vec::with_capacity(p);
                        full.push(m);
                        full.extend_from_slice(&rest);
                        term = term + &(c * w.get(&full));
                    }
                    if (i + j) % 2 == 1 {
                        acc = acc - &term;
                    } else {
                        acc = acc + &term;
                    }
                }
            }
            out.set(&idx, acc);
        }
        out
    }
}

/// Wedge of antisymmetric forms, determinant convention:
/// (a ^ b)(v_1..v_{p+q}) = sum over (p,q)-shuffles of sign * a(..) b(..).
pub fn wedge(a: &Tensor, b: &Tensor) -> Tensor {
    let (p, q) = (a.rank, b.rank);
    let n = a.n;
    let params = a.params().clone();
    let mut out = Tensor::zeros(&params, n, p + q);
    let shuffles = shuffle_indices(p + q, p);
    for idx in out.indices() {
        let mut acc = Scalar::zero(&params);
        for (sel, sign) in &shuffles {
            let ai: Vec<usize> = sel.iter().map(|&s| idx[s]).collect();
            let bi: Vec<usize> =
                (0..p + q).filter(|s| !sel.contains(s)).map(|s| idx[s]).collect();
            let v = a.get(&ai) * b.get(&bi);
            acc = if *sign > 0 { acc + &v } else { acc - &v };
        }
        out.set(&idx, acc);
    }
    out
}

fn shuffle_indices(total: usize, p: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    if p == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut comb: Vec<usize> = (0..p).collect();
    loop {
        let mut perm: Vec<usize> = comb.clone();
        perm.extend((0..total).filter(|x| !comb.contains(x)));
        let mut sign = 1;
        for i in 0..total {
            for j in (i + 1)..total {
                if perm[i] > perm[j] {
                    sign = -sign;
                }
            }
        }
        out.push((comb.clone(), sign));
        // next lexicographic combination
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if comb[i] + 1 <= total - (p - i) {
                comb[i] += 1;
                for k in (i + 1)..p {
                    comb[k] = comb[k - 1] + 1;
                }
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

/// One model geometry: algebra in its analysis frame, neutral metric,
/// the structure endomorphisms, and presentation metadata.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub algebra: LieAlgebra,
    pub metric: Metric,
    pub j1: Endo,
    pub j2: Endo,
    pub j3: Endo,
    /// +1 when the declared frame order is positively oriented for *F = +F,
    /// -1 when the orientation is flipped at catalog level (recorded).
    pub orientation: i8,
    /// Free parameters of this entry (excluding the connection parameter t).
    pub free_params: Vec<String>,
    /// Fixed parameter values baked into a specialized entry.
    pub preset: Vec<(String, crate::exact::Rational)>,
}

struct BasisSpec {
    names: Vec<&'static str>,
    brackets: Vec<(usize, usize, Vec<&'static str>)>,
    j2: Vec<(usize, Vec<&'static str>)>,
    j3: Vec<(usize, Vec<&'static str>)>,
    frame: Vec<Vec<&'static str>>,
    frame_names: Vec<&'static str>,
}

fn build_from_basis(
    name: &str,
    description: &str,
    params: &Arc<ParamSet>,
    spec: &BasisSpec,
    free_params: &[&str],
) -> Result<CatalogEntry, LieError> {
    let n = spec.names.len();
    let zero = Scalar::zero(params);
    let parse_vec = |entries: &Vec<&'static str>| -> Result<Vec<Scalar>, LieError> {
        entries.iter().map(|s| parse_scalar(s, params).map_err(LieError::from)).collect()
    };
    let mut c = Tensor::zeros(params, n, 3);
    for (i, j, v) in &spec.brackets {
        let v = parse_vec(v)?;
        for (k, s) in v.iter().enumerate() {
            c.set(&[*i, *j, k], s.clone());
            c.set(&[*j, *i, k], -s);
        }
    }
    let mut j2 = Endo::zeros(params, n);
    for (col, v) in &spec.j2 {
        let v = parse_vec(v)?;
        for (row, s) in v.iter().enumerate() {
            j2.set(row, *col, s.clone());
        }
    }
    let mut j3 = Endo::zeros(params, n);
    for (col, v) in &spec.j3 {
        let v = parse_vec(v)?;
        for (row, s) in v.iter().enumerate() {
            j3.set(row, *col, s.clone());
        }
    }
    let mut m = Mat::zeros(params, n, n);
    for (a, comb) in spec.frame.iter().enumerate() {
        let v = parse_vec(comb)?;
        for (i, s) in v.iter().enumerate() {
            *m.at_mut(i, a) = s.clone();
        }
    }
    let minv = m.inverse().map_err(LieError::Frame)?;
    let mut cf = Tensor::zeros(params, n, 3);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let mut acc = zero.clone();
                for i in 0..n {
                    for j in 0..n {
                        for mm in 0..n {
                            let cij = c.get(&[i, j, mm]);
                            if cij.is_zero() {
                                continue;
                            }
                            acc = acc + &(&(&(m.at(i, a) * m.at(j, b)) * cij) * minv.at(k, mm));
                        }
                    }
                }
                cf.set(&[a, b, k], acc);
            }
        }
    }
    let to_frame = |j: &Endo| Endo::from_mat(minv.mul(&j.to_mat()).mul(&m));
    let j2f = to_frame(&j2);
    let j3f = to_frame(&j3);
    let j1f = j2f.compose(&j3f);
    let algebra =
        LieAlgebra { n, names: spec.frame_names.iter().map(|s| s.to_string()).collect(), c: cf };
    if !algebra.jacobi_residual().is_zero() {
        return Err(LieError::CatalogValidation {
            entry: name.into(),
            reason: "Jacobi identity fails".into(),
        });
    }
    let metric = Metric::from_diag(params, &[1, 1, -1, -1]);
    Ok(CatalogEntry {
        name: name.into(),
        description: description.into(),
        algebra,
        metric,
        j1: j1f,
        j2: j2f,
        j3: j3f,
        orientation: 1,
        free_params: free_params.iter().map(|s| s.to_string()).collect(),
        preset: Vec::new(),
    })
}

fn phc_family_spec(brackets: Vec<(usize, usize, Vec<&'static str>)>) -> BasisSpec {
    // shared by PHC6, PHC9, PHC10 and sol4_1: basis X,Y,Z,W
    // J3: X->W, Y->-Z, Z->Y, W->-X ; J2: X->W-Z, Y->Z, Z->Y, W->X+Y
    // frame A=X, B=W, C=W-Z, D=-X-Y
    BasisSpec {
        names: vec!["X", "Y", "Z", "W"],
        brackets,
        j2: vec![
            (0, vec!["0", "0", "-1", "1"]),
            (1, vec!["0", "0", "1", "0"]),
            (2, vec!["0", "1", "0", "0"]),
            (3, vec!["1", "1", "0", "0"]),
        ],
        j3: vec![
            (0, vec!["0", "0", "0", "1"]),
            (1, vec!["0", "0", "-1", "0"]),
            (2, vec!["0", "1", "0", "0"]),
            (3, vec!["-1", "0", "0", "0"]),
        ],
        frame: vec![
            vec!["1", "0", "0", "0"],
            vec!["0", "0", "0", "1"],
            vec!["0", "0", "-1", "1"],
            vec!["-1", "-1", "0", "0"],
        ],
        frame_names: vec!["A", "B", "C", "D"],
    }
}

/// Standard session parameters for every catalog entry: the example
/// parameters a, b, c and the connection parameter t.
pub fn catalog_params() -> Arc<ParamSet> {
    ParamSet::new(["a", "b", "c", "t"])
}

fn specialize(
    mut e: CatalogEntry,
    name: &str,
    description: &str,
    bind: &[(&str, crate::exact::Rational)],
) -> Result<CatalogEntry, LieError> {
    let mut env = ParamEnv::new();
    for (k, v) in bind {
        env.insert(k, v.clone());
    }
    e.algebra = e.algebra.substitute(&env)?;
    e.j1 = e.j1.substitute(&env)?;
    e.j2 = e.j2.substitute(&env)?;
    e.j3 = e.j3.substitute(&env)?;
    e.name = name.into();
    e.description = description.into();
    e.free_params.clear();
    e.preset = bind.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    Ok(e)
}

/// Build the full model catalog. Every entry passes the Jacobi identity at
/// load; structure-level validation lives in `paraherm`.
pub fn catalog() -> Result<Vec<CatalogEntry>, LieError> {
    use crate::exact::rat;
    let params = catalog_params();
    let mut out = Vec::new();

    // hyperbolic Hopf model R x SL(2,R): basis W,X,Y,Z with Z central,
    // [X,Y]=W, [Y,W]=-X, [W,X]=Y ; frame (Z,X,Y,W)
    let hopf = BasisSpec {
        names: vec!["W", "X", "Y", "Z"],
        brackets: vec![
            (1, 2, vec!["1", "0", "0", "0"]),
            (2, 0, vec!["0", "-1", "0", "0"]),
            (0, 1, vec!["0", "0", "1", "0"]),
        ],
        // J2: Z->Y, X->-W, Y->Z, W->-X
        j2: vec![
            (0, vec!["0", "-1", "0", "0"]),
            (1, vec!["-1", "0", "0", "0"]),
            (2, vec!["0", "0", "0", "1"]),
            (3, vec!["0", "0", "1", "0"]),
        ],
        // J3: Z->X, Y->W, X->-Z, W->-Y
        j3: vec![
            (0, vec!["0", "0", "-1", "0"]),
            (1, vec!["0", "0", "0", "-1"]),
            (2, vec!["1", "0", "0", "0"]),
            (3, vec!["0", "1", "0", "0"]),
        ],
        frame: vec![
            vec!["0", "0", "0", "1"],
            vec!["0", "1", "0", "0"],
            vec!["0", "0", "1", "0"],
            vec!["1", "0", "0", "0"],
        ],
        frame_names: vec!["Z", "X", "Y", "W"],
    };
    out.push(build_from_basis(
        "hopf",
        "R x SL(2,R) (hyperbolic Hopf model), frame (Z,X,Y,W)",
        &params,
        &hopf,
        &[],
    )?);

    // PHC5: [X,Y]=X ; J3: X->Y, Y->-X, Z->W, W->-Z ;
    // J2: X->Y-Z, Y->X+W, Z->W, W->Z ; frame A=X,B=Y,C=Y-Z,D=-X-W
    let phc5 = BasisSpec {
        names: vec!["X", "Y", "Z", "W"],
        brackets: vec![(0, 1, vec!["1", "0", "0", "0"])],
        j2: vec![
            (0, vec!["0", "1", "-1", "0"]),
            (1, vec!["1", "0", "0", "1"]),
            (2, vec!["0", "0", "0", "1"]),
            (3, vec!["0", "0", "1", "0"]),
        ],
        j3: vec![
            (0, vec!["0", "1", "0", "0"]),
            (1, vec!["-1", "0", "0", "0"]),
            (2, vec!["0", "0", "0", "1"]),
            (3, vec!["0", "0", "-1", "0"]),
        ],
        frame: vec![
            vec!["1", "0", "0", "0"],
            vec!["0", "1", "0", "0"],
            vec!["0", "1", "-1", "0"],
            vec!["-1", "0", "0", "-1"],
        ],
        frame_names: vec!["A", "B", "C", "D"],
    };
    out.push(build_from_basis("phc5", "solvable PHC5, [X,Y]=X", &params, &phc5, &[])?);

    // PHC6(a,b): [X,Y]=Z, [X,W]=X+aY+bZ, [W,Y]=Y
    let phc6 = phc_family_spec(vec![
        (0, 1, vec!["0", "0", "1", "0"]),
        (0, 3, vec!["1", "a", "b", "0"]),
        (3, 1, vec!["0", "1", "0", "0"]),
    ]);
    out.push(build_from_basis("phc6", "solvable PHC6(a,b)", &params, &phc6, &["a", "b"])?);

    // PHC9(a,b,c): [Z,W]=Z, [X,W]=cX+aY+bZ, [Y,W]=Y (c != 0)
    let phc9 = phc_family_spec(vec![
        (2, 3, vec!["0", "0", "1", "0"]),
        (0, 3, vec!["c", "a", "b", "0"]),
        (1, 3, vec!["0", "1", "0", "0"]),
    ]);
    let phc9_entry =
        build_from_basis("phc9", "solvable PHC9(a,b,c), c != 0", &params, &phc9, &["a", "b", "c"])?;
    out.push(phc9_entry.clone());
    out.push(specialize(
        phc9_entry.clone(),
        "phc9_c_minus2",
        "PHC9 at c=-2, a=b=0 (anti-self-dual, non-zero Weyl)",
        &[("c", rat(-2)), ("a", rat(0)), ("b", rat(0))],
    )?);
    out.push(specialize(
        phc9_entry,
        "phc9_c_minus1",
        "PHC9 at c=-1, a=b=0 (hypersymplectic, vanishing Lee form)",
        &[("c", rat(-1)), ("a", rat(0)), ("b", rat(0))],
    )?);

    // PHC10(a,b,c) as printed: [Y,X]=Z, [W,Z]=cZ, [W,X]=X/2+aY+bZ,
    // [W,Y]=(c-1/2)Y. With this table J2 and J3 are NOT integrable (the
    // Nijenhuis tensors are constant); the printed curvature value still
    // matches. The variant below with coefficient 1 is integrable.
    let phc10 = phc_family_spec(vec![
        (1, 0, vec!["0", "0", "1", "0"]),
        (3, 2, vec!["0", "0", "c", "0"]),
        (3, 0, vec!["1/2", "a", "b", "0"]),
        (3, 1, vec!["0", "c - 1/2", "0", "0"]),
    ]);
    out.push(build_from_basis(
        "phc10",
        "solvable PHC10(a,b,c) as printed, c != 0",
        &params,
        &phc10,
        &["a", "b", "c"],
    )?);

    // PHC10 with the bracket coefficient 1: [W,X]=X+aY+bZ, [W,Y]=(c-1)Y;
    // the unique coefficient for which the shared structure tables give an
    // integrable (hyper-paracomplex) triple.
    let phc10i = phc_family_spec(vec![
        (1, 0, vec!["0", "0", "1", "0"]),
        (3, 2, vec!["0", "0", "c", "0"]),
        (3, 0, vec!["1", "a", "b", "0"]),
        (3, 1, vec!["0", "c - 1", "0", "0"]),
    ]);
    out.push(build_from_basis(
        "phc10_integrable",
        "PHC10 variant with bracket coefficient 1 (integrable triple)",
        &params,
        &phc10i,
        &["a", "b", "c"],
    )?);

    // sol4_1: [X,Y]=Z, [X,W]=X, [W,Y]=Y (= PHC6 at a=b=0)
    let sol41 = phc_family_spec(vec![
        (0, 1, vec!["0", "0", "1", "0"]),
        (0, 3, vec!["1", "0", "0", "0"]),
        (3, 1, vec!["0", "1", "0", "0"]),
    ]);
    out.push(build_from_basis("sol4_1", "solvable sol^4_1 (Inoe model)", &params, &sol41, &[])?);

    // abelian4 control: flat model with the standard triple
    let abelian = BasisSpec {
        names: vec!["e1", "e2", "e3", "e4"],
        brackets: vec![],
        j2: vec![
            (0, vec!["0", "0", "1", "0"]),
            (1, vec!["0", "0", "0", "-1"]),
            (2, vec!["1", "0", "0", "0"]),
            (3, vec!["0", "-1", "0", "0"]),
        ],
        j3: vec![
            (0, vec!["0", "1", "0", "0"]),
            (1, vec!["-1", "0", "0", "0"]),
            (2, vec!["0", "0", "0", "1"]),
            (3, vec!["0", "0", "-1", "0"]),
        ],
        frame: vec![
            vec!["1", "0", "0", "0"],
            vec!["0", "1", "0", "0"],
            vec!["0", "0", "1", "0"],
            vec!["0", "0", "0", "1"],
        ],
        frame_names: vec!["e1", "e2", "e3", "e4"],
    };
    out.push(build_from_basis("abelian4", "abelian control entry", &params, &abelian, &[])?);

    Ok(out)
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry, LieError> {
    catalog()?.into_iter().find(|e| e.name == name).ok_or_else(|| LieError::CatalogValidation {
        entry: name.into(),
        reason: "no such catalog entry".into(),
    })
}

// ---------------------------------------------------------------------------
// structure file format
// ---------------------------------------------------------------------------

/// Parsed user structure: algebra already transformed to the analysis frame.
#[derive(Debug, Clone)]
pub struct ParsedStructure {
    pub params: Arc<ParamSet>,
    pub algebra: LieAlgebra,
    pub metric: Metric,
    pub j2: Option<Endo>,
    pub j3: Option<Endo>,
    pub p: Option<Endo>,
}

/// Parse the plain-text structure format: sections `params`, `basis`,
/// `brackets`, `frame`, `metric`, `endo`; `#` comments; whitespace loose.
pub fn parse_structure(text: &str) -> Result<ParsedStructure, LieError> {
    let mut params_names: Vec<String> = Vec::new();
    let mut basis: Vec<String> = Vec::new();
    let mut bracket_lines: Vec<(usize, String)> = Vec::new();
    let mut frame_lines: Vec<(usize, String)> = Vec::new();
    let mut metric_line: Option<(usize, String)> = None;
    let mut endo_lines: Vec<(usize, String, String)> = Vec::new();

    #[derive(PartialEq)]
    enum Section {
        None,
        Brackets,
        Frame,
    }
    let mut section = Section::None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        if let Some(rest) = line.strip_prefix("params") {
            params_names = rest.split_whitespace().map(|s| s.to_string()).collect();
            section = Section::None;
        } else if let Some(rest) = line.strip_prefix("basis") {
            basis = rest.split_whitespace().map(|s| s.to_string()).collect();
            section = Section::None;
        } else if line == "brackets" {
            section = Section::Brackets;
        } else if line == "frame" {
            section = Section::Frame;
        } else if let Some(rest) = line.strip_prefix("metric") {
            metric_line = Some((lineno, rest.trim().to_string()));
            section = Section::None;
        } else if let Some(rest) = line.strip_prefix("endo") {
            let (name, expr) = rest.split_once('=').ok_or(LieError::FileFormat {
                line: lineno,
                msg: "expected `endo NAME = [[..],..]`".into(),
            })?;
            endo_lines.push((lineno, name.trim().to_string(), expr.trim().to_string()));
            section = Section::None;
        } else {
            match section {
                Section::Brackets => bracket_lines.push((lineno, line.to_string())),
                Section::Frame => frame_lines.push((lineno, line.to_string())),
                Section::None => {
                    return Err(LieError::FileFormat {
                        line: lineno,
                        msg: format!("unexpected content outside a section: `{line}`"),
                    })
                }
            }
        }
    }

    if basis.is_empty() {
        return Err(LieError::FileFormat { line: 0, msg: "missing `basis` section".into() });
    }
    let n = basis.len();
    let params = ParamSet::new(params_names.iter().cloned());
    // extended set: declared params plus basis names, for linear combinations
    let mut ext_names = params_names.clone();
    ext_names.extend(basis.iter().cloned());
    let ext = ParamSet::new(ext_names);

    let linear_combination = |expr: &str, lineno: usize| -> Result<Vec<Scalar>, LieError> {
        let s = parse_scalar(expr, &ext)
            .map_err(|e| LieError::FileFormat { line: lineno, msg: format!("{e}") })?;
        let mut zero_env = ParamEnv::new();
        for b in &basis {
            zero_env.insert(b, crate::exact::rat(0));
        }
        let mut coeffs = Vec::with_capacity(n);
        let mut residual = s.clone();
        for b in &basis {
            let d = s
                .derivative(b)
                .map_err(|e| LieError::FileFormat { line: lineno, msg: format!("{e}") })?;
            let coeff = d.substitute(&zero_env).map_err(|_| LieError::FileFormat {
                line: lineno,
                msg: "coefficients must not involve basis elements".into(),
            })?;
            if d != coeff {
                return Err(LieError::FileFormat {
                    line: lineno,
                    msg: format!("expression is not linear in basis element {b}"),
                });
            }
            let bterm = &coeff * &Scalar::param(&ext, b).unwrap();
            residual = &residual - &bterm;
            coeffs.push(reparse(&coeff, &params, lineno)?);
        }
        if !residual.is_zero() {
            return Err(LieError::FileFormat {
                line: lineno,
                msg: "expression has terms outside the basis span".into(),
            });
        }
        Ok(coeffs)
    };

    let mut c = Tensor::zeros(&params, n, 3);
    for (lineno, line) in &bracket_lines {
        let (lhs, rhs) = line.split_once('=').ok_or(LieError::FileFormat {
            line: *lineno,
            msg: "expected `[X,Y] = expr`".into(),
        })?;
        let lhs = lhs.trim();
        if !(lhs.starts_with('[') && lhs.ends_with(']')) {
            return Err(LieError::FileFormat {
                line: *lineno,
                msg: "expected `[X,Y]` on the left".into(),
            });
        }
        let inner = &lhs[1..lhs.len() - 1];
        let (xn, yn) = inner.split_once(',').ok_or(LieError::FileFormat {
            line: *lineno,
            msg: "expected two names in the bracket".into(),
        })?;
        let pos = |nm: &str| {
            basis.iter().position(|b| b == nm.trim()).ok_or(LieError::FileFormat {
                line: *lineno,
                msg: format!("unknown basis element `{}`", nm.trim()),
            })
        };
        let (xi, yi) = (pos(xn)?, pos(yn)?);
        let coeffs = linear_combination(rhs.trim(), *lineno)?;
        for (k, v) in coeffs.iter().enumerate() {
            c.set(&[xi, yi, k], v.clone());
            c.set(&[yi, xi, k], -v);
        }
    }

    let mut frame_names: Vec<String> = basis.clone();
    let mut m = Mat::identity(&params, n);
    if !frame_lines.is_empty() {
        if frame_lines.len() != n {
            return Err(LieError::FileFormat {
                line: frame_lines[0].0,
                msg: format!("frame must declare exactly {n} vectors"),
            });
        }
        frame_names.clear();
        m = Mat::zeros(&params, n, n);
        for (a, (lineno, line)) in frame_lines.iter().enumerate() {
            let (name, rhs) = line.split_once('=').ok_or(LieError::FileFormat {
                line: *lineno,
                msg: "expected `NAME = combination`".into(),
            })?;
            frame_names.push(name.trim().to_string());
            let coeffs = linear_combination(rhs.trim(), *lineno)?;
            for (i, v) in coeffs.iter().enumerate() {
                *m.at_mut(i, a) = v.clone();
            }
        }
    }
    let minv = m.inverse().map_err(|_| LieError::FileFormat {
        line: 0,
        msg: "frame vectors are linearly dependent".into(),
    })?;
    let mut cf = Tensor::zeros(&params, n, 3);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let mut acc = Scalar::zero(&params);
                for i in 0..n {
                    for j in 0..n {
                        for mm in 0..n {
                            let cij = c.get(&[i, j, mm]);
                            if !cij.is_zero() {
                                acc = acc + &(&(&(m.at(i, a) * m.at(j, b)) * cij) * minv.at(k, mm));
                            }
                        }
                    }
                }
                cf.set(&[a, b, k], acc);
            }
        }
    }

    let (lineno, mexpr) = metric_line
        .ok_or(LieError::FileFormat { line: 0, msg: "missing `metric` section".into() })?;
    let gm = if let Some(rest) = mexpr.strip_prefix("diag(") {
        let rest = rest.strip_suffix(')').ok_or(LieError::FileFormat {
            line: lineno,
            msg: "unterminated diag(...)".into(),
        })?;
        let entries: Vec<&str> = rest.split(',').collect();
        if entries.len() != n {
            return Err(LieError::FileFormat {
                line: lineno,
                msg: format!("diag needs {n} entries"),
            });
        }
        let mut g = Mat::zeros(&params, n, n);
        for (i, e) in entries.iter().enumerate() {
            *g.at_mut(i, i) = parse_scalar(e, &params)
                .map_err(|e| LieError::FileFormat { line: lineno, msg: format!("{e}") })?;
        }
        g
    } else {
        parse_matrix(&mexpr, n, &params, lineno)?
    };
    let metric = Metric::new(gm)
        .map_err(|_| LieError::FileFormat { line: lineno, msg: "metric is degenerate".into() })?;

    let mut j2 = None;
    let mut j3 = None;
    let mut p = None;
    for (lineno, name, expr) in &endo_lines {
        let endo = Endo::from_mat(parse_matrix(expr, n, &params, *lineno)?);
        match name.as_str() {
            "J2" => j2 = Some(endo),
            "J3" => j3 = Some(endo),
            "P" => p = Some(endo),
            other => {
                return Err(LieError::FileFormat {
                    line: *lineno,
                    msg: format!("unknown endomorphism `{other}` (expected J2, J3 or P)"),
                })
            }
        }
    }

    Ok(ParsedStructure {
        params,
        algebra: LieAlgebra { n, names: frame_names, c: cf },
        metric,
        j2,
        j3,
        p,
    })
}

fn reparse(s: &Scalar, params: &Arc<ParamSet>, lineno: usize) -> Result<Scalar, LieError> {
    parse_scalar(&s.to_string(), params).map_err(|e| LieError::FileFormat {
        line: lineno,
        msg: format!("coefficient uses undeclared names: {e}"),
    })
}

fn parse_matrix(
    expr: &str,
    n: usize,
    params: &Arc<ParamSet>,
    lineno: usize,
) -> Result<Mat, LieError> {
    let c: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = c
        .strip_prefix("[[")
        .and_then(|s| s.strip_suffix("]]"))
        .ok_or(LieError::FileFormat { line: lineno, msg: "expected [[..],[..],..]".into() })?;
    let rows: Vec<&str> = inner.split("],[").collect();
    if rows.len() != n {
        return Err(LieError::FileFormat { line: lineno, msg: format!("matrix needs {n} rows") });
    }
    let mut m = Mat::zeros(params, n, n);
    for (i, row) in rows.iter().enumerate() {
        let cells = split_top_level(row);
        if cells.len() != n {
            return Err(LieError::FileFormat {
                line: lineno,
                msg: format!("matrix row {} needs {n} entries", i + 1),
            });
        }
        for (j, cell) in cells.iter().enumerate() {
            *m.at_mut(i, j) = parse_scalar(cell, params)
                .map_err(|e| LieError::FileFormat { line: lineno, msg: format!("{e}") })?;
        }
    }
    Ok(m)
}

fn split_top_level(row: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in row.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(ch);
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
            }
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out
}
