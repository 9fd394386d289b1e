//! Floating-point finite-difference oracle for the coordinate metrics: an
//! independent check of the invariant Koszul/curvature pipeline. Frames are
//! realized in explicit charts, the metric is differenced with fourth-order
//! central stencils, and curvature components are compared against the
//! exact invariant computation through a declared frame correspondence.

pub type Point = [f64; 4];
pub type Metric4 = [[f64; 4]; 4];
/// columns are the frame vectors
pub type Frame4 = [[f64; 4]; 4];

fn inv4(m: &Metric4) -> Metric4 {
    // Gauss-Jordan with partial pivoting
    let mut a = *m;
    let mut inv = [[0.0; 4]; 4];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..4 {
        let mut piv = col;
        for r in (col + 1)..4 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..4 {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..4 {
            if r != col {
                let f = a[r][col];
                for j in 0..4 {
                    a[r][j] -= f * a[col][j];
                    inv[r][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

fn dmetric(g: &dyn Fn(&Point) -> Metric4, p: &Point, h: f64) -> [[[f64; 4]; 4]; 4] {
    let mut out = [[[0.0; 4]; 4]; 4];
    for m in 0..4 {
        let shift = |s: f64| {
            let mut q = *p;
            q[m] += s;
            g(&q)
        };
        let (p1, m1, p2, m2) = (shift(h), shift(-h), shift(2.0 * h), shift(-2.0 * h));
        for i in 0..4 {
            for j in 0..4 {
                out[m][i][j] =
                    (8.0 * (p1[i][j] - m1[i][j]) - (p2[i][j] - m2[i][j])) / (12.0 * h);
            }
        }
    }
    out
}

fn christoffel(g: &dyn Fn(&Point) -> Metric4, p: &Point, h: f64) -> [[[f64; 4]; 4]; 4] {
    let gv = g(p);
    let gi = inv4(&gv);
    let dg = dmetric(g, p, h);
    let mut gam = [[[0.0; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                let mut s = 0.0;
                for l in 0..4 {
                    s += gi[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                }
                gam[i][j][k] = 0.5 * s;
            }
        }
    }
    gam
}

/// Lowered curvature R_{ijkl} of a coordinate metric at a point by
/// fourth-order finite differences.
pub fn fd_curvature(g: &dyn Fn(&Point) -> Metric4, p: &Point, h: f64) -> [[[[f64; 4]; 4]; 4]; 4] {
    let gam0 = christoffel(g, p, h);
    let mut dgam = [[[[0.0; 4]; 4]; 4]; 4];
    for m in 0..4 {
        let shift = |s: f64| {
            let mut q = *p;
            q[m] += s;
            christoffel(g, &q, h)
        };
        let (p1, m1, p2, m2) = (shift(h), shift(-h), shift(2.0 * h), shift(-2.0 * h));
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    dgam[m][i][j][k] = (8.0 * (p1[i][j][k] - m1[i][j][k])
                        - (p2[i][j][k] - m2[i][j][k]))
                        / (12.0 * h);
                }
            }
        }
    }
    let gv = g(p);
    let mut low = [[[[0.0; 4]; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let mut up = dgam[i][j][k][l] - dgam[j][i][k][l];
                    for m in 0..4 {
                        up += gam0[j][k][m] * gam0[i][m][l] - gam0[i][k][m] * gam0[j][m][l];
                    }
                    // lower the last index
                    let mut s = 0.0;
                    for e in 0..4 {
                        let mut upe = dgam[i][j][k][e] - dgam[j][i][k][e];
                        for m in 0..4 {
                            upe += gam0[j][k][m] * gam0[i][m][e] - gam0[i][k][m] * gam0[j][m][e];
                        }
                        s += upe * gv[e][l];
                    }
                    let _ = up;
                    low[i][j][k][l] = s;
                }
            }
        }
    }
    low
}

/// Metric induced by declaring the frame columns orthonormal with signs eps.
pub fn metric_from_frame(frame: &dyn Fn(&Point) -> Frame4, eps: [f64; 4], p: &Point) -> Metric4 {
    let e = frame(p);
    let einv = inv4(&e);
    // g = einv^T diag(eps) einv
    let mut g = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                s += einv[a][i] * eps[a] * einv[a][j];
            }
            g[i][j] = s;
        }
    }
    g
}

/// Curvature components in the frame: R(E_a, E_b, E_c, E_d).
pub fn frame_components(r: &[[[[f64; 4]; 4]; 4]; 4], e: &Frame4) -> [[[[f64; 4]; 4]; 4]; 4] {
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut s = 0.0;
                    for i in 0..4 {
                        for j in 0..4 {
                            for k in 0..4 {
                                for l in 0..4 {
                                    s += r[i][j][k][l] * e[i][a] * e[j][b] * e[k][c] * e[l][d];
                                }
                            }
                        }
                    }
                    out[a][b][c][d] = s;
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// charts for the catalog entries
// ---------------------------------------------------------------------------

/// One coordinate realization: frame fields in a chart, the coordinate
/// metric (closed form), sample points, and the frame correspondence to the
/// abstract analysis frame (columns of `correspondence` express each chart
/// frame vector in the abstract frame).
pub struct Chart {
    pub name: &'static str,
    pub frame: fn(&Point) -> Frame4,
    pub metric: fn(&Point) -> Metric4,
    pub points: Vec<Point>,
    pub correspondence: [[f64; 4]; 4],
    /// catalog entry whose invariant curvature this chart must match
    pub entry: &'static str,
    /// metric overrides the catalog's diag(1,1,-1,-1) when set
    pub coeffs: Option<[f64; 4]>,
}

fn ident4() -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

/// sol^4_1, the chart printed with the model: A = e^{-t} dx, B = dt,
/// C = dt - dz, D = -e^{-t} dx - e^t dy - e^t x dz; coordinates (x,y,z,t).
pub fn sol41_chart() -> Chart {
    fn frame(p: &Point) -> Frame4 {
        let (x, t) = (p[0], p[3]);
        let a = [(-t).exp(), 0.0, 0.0, 0.0];
        let b = [0.0, 0.0, 0.0, 1.0];
        let c = [0.0, 0.0, -1.0, 1.0];
        let d = [-(-t).exp(), -t.exp(), -t.exp() * x, 0.0];
        cols(a, b, c, d)
    }
    fn metric(p: &Point) -> Metric4 {
        let (x, t) = (p[0], p[3]);
        let e2t = (2.0 * t).exp();
        let mut g = [[0.0; 4]; 4];
        g[0][0] = e2t;
        g[3][3] = 1.0;
        g[0][1] = -1.0;
        g[1][0] = -1.0;
        g[3][2] = 1.0;
        g[2][3] = 1.0;
        g[3][1] = -x;
        g[1][3] = -x;
        g
    }
    Chart {
        name: "sol4_1 printed chart",
        frame,
        metric,
        points: vec![[0.3, -0.2, 0.5, 0.1], [1.0, 0.4, -0.2, 0.6], [-0.3, 0.2, 0.1, -0.4]],
        correspondence: ident4(),
        entry: "sol4_1",
        coeffs: None,
    }
}

/// PHC9 at c=-2: printed chart A = e^{-2t} dx, B = dt, C = dt - e^t dz,
/// D = -e^{-2t} dx - e^t dy. The chart realizes the algebra with the time
/// direction reversed; the correspondence (A, -B, -C, D) maps its frame to
/// the analysis frame.
pub fn phc9_c2_chart() -> Chart {
    fn frame(p: &Point) -> Frame4 {
        let t = p[3];
        let a = [(-2.0 * t).exp(), 0.0, 0.0, 0.0];
        let b = [0.0, 0.0, 0.0, 1.0];
        let c = [0.0, 0.0, -t.exp(), 1.0];
        let d = [-(-2.0 * t).exp(), -t.exp(), 0.0, 0.0];
        cols(a, b, c, d)
    }
    fn metric(p: &Point) -> Metric4 {
        let t = p[3];
        let mut g = [[0.0; 4]; 4];
        g[0][0] = (4.0 * t).exp();
        g[3][3] = 1.0;
        g[0][1] = -t.exp();
        g[1][0] = -t.exp();
        g[3][2] = (-t).exp();
        g[2][3] = (-t).exp();
        g
    }
    let mut corr = ident4();
    corr[1][1] = -1.0;
    corr[2][2] = -1.0;
    Chart {
        name: "phc9 (c=-2) printed chart",
        frame,
        metric,
        points: vec![[0.1, -0.2, 0.3, 0.15], [0.5, 0.3, -0.4, -0.3], [0.0, 0.0, 0.0, 0.2]],
        correspondence: corr,
        entry: "phc9_c_minus2",
        coeffs: None,
    }
}

/// PHC5 in the derived chart: A = e^{-y} dx, B = dy, C = dy - dz,
/// D = -e^{-y} dx - dt; induced metric e^{2y} dx^2 + dy^2
/// - e^{y}(dx dt + dt dx) + (dy dz + dz dy).
pub fn phc5_chart() -> Chart {
    fn frame(p: &Point) -> Frame4 {
        let y = p[1];
        let a = [(-y).exp(), 0.0, 0.0, 0.0];
        let b = [0.0, 1.0, 0.0, 0.0];
        let c = [0.0, 1.0, -1.0, 0.0];
        let d = [-(-y).exp(), 0.0, 0.0, -1.0];
        cols(a, b, c, d)
    }
    fn metric(p: &Point) -> Metric4 {
        let y = p[1];
        let mut g = [[0.0; 4]; 4];
        g[0][0] = (2.0 * y).exp();
        g[1][1] = 1.0;
        g[0][3] = -y.exp();
        g[3][0] = -y.exp();
        g[1][2] = 1.0;
        g[2][1] = 1.0;
        g
    }
    Chart {
        name: "phc5 derived chart",
        frame,
        metric,
        points: vec![[0.3, -0.2, 0.5, 0.1], [1.0, 0.4, -0.2, 0.6], [0.0, 0.0, 0.0, 0.0]],
        correspondence: ident4(),
        entry: "phc5",
        coeffs: None,
    }
}

/// The coordinate metric printed with PHC5 (cross term e^{-y} instead of
/// e^{y}); kept for the documented comparison anchor.
pub fn phc5_printed_metric(p: &Point) -> Metric4 {
    let y = p[1];
    let mut g = [[0.0; 4]; 4];
    g[0][0] = (2.0 * y).exp();
    g[1][1] = 1.0;
    g[0][3] = -(-y).exp();
    g[3][0] = -(-y).exp();
    g[1][2] = 1.0;
    g[2][1] = 1.0;
    g
}

// Hopf chart: (x,y,z) parameterize SL(2,R) through the quadric
// a^2+b^2-c^2-d^2 = 1 via a = Cz Cy cos x, b = Cz Cy sin x, c = Cz Sy,
// d = Sz, with the matrix [[a+c, b+d], [d-b, a-c]]; t is the R factor.

fn hopf_embed(x: f64, y: f64, z: f64) -> [f64; 4] {
    let (cy, sy) = (y.cosh(), y.sinh());
    let (cz, sz) = (z.cosh(), z.sinh());
    [cz * cy * x.cos(), cz * cy * x.sin(), cz * sy, sz]
}

fn hopf_matrix(x: f64, y: f64, z: f64) -> [[f64; 2]; 2] {
    let [a, b, c, d] = hopf_embed(x, y, z);
    [[a + c, b + d], [d - b, a - c]]
}

/// Chart velocity of the left-invariant field of a 2x2 generator at (x,y,z):
/// differentiate chart^{-1}(M exp(s gen)) analytically at s = 0.
fn hopf_field(gen: [[f64; 2]; 2], x: f64, y: f64, z: f64) -> [f64; 3] {
    let m = hopf_matrix(x, y, z);
    // Mdot = M * gen
    let mut md = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                md[i][j] += m[i][k] * gen[k][j];
            }
        }
    }
    let (pd, qd, rd, sd) = (md[0][0], md[0][1], md[1][0], md[1][1]);
    let adot = (pd + sd) / 2.0;
    let bdot = (qd - rd) / 2.0;
    let cdot = (pd - sd) / 2.0;
    let ddot = (qd + rd) / 2.0;
    let [a, b, _c, _d] = hopf_embed(x, y, z);
    let (cy, _sy) = (y.cosh(), y.sinh());
    let (cz, sz) = (z.cosh(), z.sinh());
    let zdot = ddot / cz;
    // y = asinh(c / cosh z) ; u = c / cz
    let c = cz * y.sinh();
    let udot = cdot / cz - c * sz * zdot / (cz * cz);
    let ydot = udot / cy;
    let xdot = (a * bdot - b * adot) / (a * a + b * b);
    [xdot, ydot, zdot]
}

const XGEN: [[f64; 2]; 2] = [[0.0, 0.5], [-0.5, 0.0]];
const YGEN: [[f64; 2]; 2] = [[-0.5, 0.0], [0.0, 0.5]];
const WGEN: [[f64; 2]; 2] = [[0.0, 0.5], [0.5, 0.0]];

fn hopf_frame(p: &Point) -> Frame4 {
    let (x, y, z) = (p[0], p[1], p[2]);
    let xv = hopf_field(XGEN, x, y, z);
    let yv = hopf_field(YGEN, x, y, z);
    let wv = hopf_field(WGEN, x, y, z);
    // frame order (Z, X, Y, W); chart coordinates (x, y, z, t)
    cols(
        [0.0, 0.0, 0.0, 1.0],
        [xv[0], xv[1], xv[2], 0.0],
        [yv[0], yv[1], yv[2], 0.0],
        [wv[0], wv[1], wv[2], 0.0],
    )
}

/// Hopf main metric (invariant frame orthonormal (1,1,-1,-1)); the metric
/// function goes through the closed-form frame.
pub fn hopf_chart() -> Chart {
    fn metric(p: &Point) -> Metric4 {
        metric_from_frame(&hopf_frame, [1.0, 1.0, -1.0, -1.0], p)
    }
    Chart {
        name: "hopf chart (matrix realization)",
        frame: hopf_frame,
        metric,
        points: vec![[0.2, 0.3, -0.4, 0.5], [0.5, -0.1, 0.2, 0.0], [-0.3, 0.15, 0.25, 1.0]],
        correspondence: ident4(),
        entry: "hopf",
        coeffs: None,
    }
}

/// The coordinate metric printed with the Hopf model: the neutral product
/// of the pseudosphere metric and the flat line; it corresponds to the
/// invariant metric diag(1, 1/4, -1/4, -1/4) on the frame (Z, X, Y, W).
pub fn hopf_product_chart() -> Chart {
    fn metric(p: &Point) -> Metric4 {
        let (y, z) = (p[1], p[2]);
        let (cy, cz) = (y.cosh(), z.cosh());
        let mut g = [[0.0; 4]; 4];
        g[0][0] = cy * cy * cz * cz;
        g[1][1] = -cz * cz;
        g[2][2] = -1.0;
        g[3][3] = 1.0;
        g
    }
    Chart {
        name: "hopf printed product metric",
        frame: hopf_frame,
        metric,
        points: vec![[0.2, 0.3, -0.4, 0.5], [0.5, -0.1, 0.2, 0.0], [-0.3, 0.15, 0.25, 1.0]],
        correspondence: ident4(),
        entry: "hopf",
        coeffs: Some([1.0, 0.25, -0.25, -0.25]),
    }
}

fn cols(a: [f64; 4], b: [f64; 4], c: [f64; 4], d: [f64; 4]) -> Frame4 {
    let mut e = [[0.0; 4]; 4];
    for i in 0..4 {
        e[i][0] = a[i];
        e[i][1] = b[i];
        e[i][2] = c[i];
        e[i][3] = d[i];
    }
    e
}

/// Compare the FD curvature of a chart against an exact invariant curvature
/// tensor (given as f64 components in the analysis frame); returns the
/// largest componentwise deviation over the chart's sample points.
pub fn compare_chart(chart: &Chart, r_invariant: &[[[[f64; 4]; 4]; 4]; 4], h: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for p in &chart.points {
        let r = fd_curvature(&|q: &Point| (chart.metric)(q), p, h);
        let e = (chart.frame)(p);
        let rf = frame_components(&r, &e);
        // apply the correspondence: chart frame vector a = sum_b corr[b][a] * abstract_b
        let c = &chart.correspondence;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let mut expect = 0.0;
                        for a in 0..4 {
                            for b in 0..4 {
                                for cc in 0..4 {
                                    for dd in 0..4 {
                                        expect += c[a][i]
                                            * c[b][j]
                                            * c[cc][k]
                                            * c[dd][l]
                                            * r_invariant[a][b][cc][dd];
                                    }
                                }
                            }
                        }
                        let dev = (rf[i][j][k][l] - expect).abs();
                        if dev > worst {
                            worst = dev;
                        }
                    }
                }
            }
        }
    }
    worst
}
