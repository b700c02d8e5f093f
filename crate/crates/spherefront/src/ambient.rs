//! Linear algebra over the ambient space `R^{n+2}`: signed inner products,
//! the generalized wedge product, frame orthonormalization, and rigid
//! point-cloud alignment over the orthogonal group.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Which inner product a vector belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signature {
    Euclidean,
    /// Minkowski sign convention `⟨x,x⟩ = -x₁² + x₂² + …`.
    Lorentzian,
}

/// A point or direction of the ambient space, tagged with its signature.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVector {
    pub coords: DVector<f64>,
    pub signature: Signature,
}

impl AmbientVector {
    pub fn euclidean(coords: Vec<f64>) -> Self {
        AmbientVector { coords: DVector::from_vec(coords), signature: Signature::Euclidean }
    }

    pub fn lorentzian(coords: Vec<f64>) -> Self {
        AmbientVector { coords: DVector::from_vec(coords), signature: Signature::Lorentzian }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Signed inner product of two same-signature vectors.
pub fn inner(u: &AmbientVector, v: &AmbientVector) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), got: v.dim() });
    }
    if u.signature != v.signature {
        return Err(Error::SignatureMismatch);
    }
    Ok(inner_raw(&u.coords, &v.coords, u.signature))
}

pub(crate) fn inner_raw(u: &DVector<f64>, v: &DVector<f64>, sig: Signature) -> f64 {
    match sig {
        Signature::Euclidean => u.dot(v),
        Signature::Lorentzian => u.dot(v) - 2.0 * u[0] * v[0],
    }
}

/// Determinant-expansion product of `d-1` vectors in `R^d`, orthogonal to
/// each factor: the cofactor expansion along a symbolic first row of basis
/// vectors. In `R^3` this is the cross product.
pub fn wedge(vs: &[AmbientVector]) -> Result<AmbientVector> {
    if vs.is_empty() {
        return Err(Error::DimensionMismatch { expected: 1, got: 0 });
    }
    let d = vs[0].dim();
    if vs.len() != d - 1 {
        return Err(Error::DimensionMismatch { expected: d - 1, got: vs.len() });
    }
    for v in vs {
        if v.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: v.dim() });
        }
        if v.signature != Signature::Euclidean {
            return Err(Error::SignatureMismatch);
        }
    }
    let rows: Vec<&DVector<f64>> = vs.iter().map(|v| &v.coords).collect();
    Ok(AmbientVector { coords: wedge_raw(&rows), signature: Signature::Euclidean })
}

pub(crate) fn wedge_raw(rows: &[&DVector<f64>]) -> DVector<f64> {
    let d = rows[0].len();
    debug_assert_eq!(rows.len(), d - 1);
    let mut out = DVector::zeros(d);
    // Minor determinants by LU; the k = d-1 case is cheap enough that no
    // special small-size path is needed.
    for col in 0..d {
        let mut minor = DMatrix::zeros(d - 1, d - 1);
        for (i, row) in rows.iter().enumerate() {
            let mut jj = 0;
            for j in 0..d {
                if j == col {
                    continue;
                }
                minor[(i, jj)] = row[j];
                jj += 1;
            }
        }
        let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
        out[col] = sign * minor.determinant();
    }
    out
}

/// A list of ambient vectors meant to be orthonormal, with the measured
/// deviation `max |⟨v_i, v_j⟩ - δ_ij|`.
#[derive(Debug, Clone)]
pub struct OrthoFrame {
    pub vectors: Vec<AmbientVector>,
    pub gram_defect: f64,
}

impl OrthoFrame {
    pub fn new(vectors: Vec<AmbientVector>) -> Self {
        let gram_defect = gram_defect(&vectors);
        OrthoFrame { vectors, gram_defect }
    }
}

pub fn gram_defect(vectors: &[AmbientVector]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            let g = inner_raw(&u.coords, &v.coords, u.signature);
            worst = worst.max((g - target).abs());
        }
    }
    worst
}

/// Gram–Schmidt pass preserving the span flag and the direction of the
/// first vector. Errors when the input is nearly dependent (smallest Gram
/// eigenvalue below `1e-8`).
pub fn orthonormalize(frame: &OrthoFrame) -> Result<OrthoFrame> {
    let vs = &frame.vectors;
    if vs.is_empty() {
        return Ok(frame.clone());
    }
    let sig = vs[0].signature;
    if sig != Signature::Euclidean {
        return Err(Error::SignatureMismatch);
    }
    let k = vs.len();
    let mut gram = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = vs[i].coords.dot(&vs[j].coords);
        }
    }
    let min_eig = gram
        .symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if min_eig <= 1e-8 {
        return Err(Error::DegenerateFrame(min_eig));
    }
    let cols: Vec<DVector<f64>> = vs.iter().map(|v| v.coords.clone()).collect();
    let ortho = mgs(&cols);
    Ok(OrthoFrame::new(
        ortho
            .into_iter()
            .map(|coords| AmbientVector { coords, signature: sig })
            .collect(),
    ))
}

/// Modified Gram–Schmidt with a second re-orthogonalization sweep.
pub(crate) fn mgs(vectors: &[DVector<f64>]) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for u in &out {
                let c = w.dot(u);
                w.axpy(-c, u, 1.0);
            }
        }
        let n = w.norm();
        out.push(w / n);
    }
    out
}

/// Least-squares rigid alignment: the orthogonal matrix `A` minimizing
/// `Σ |A·src_i − dst_i|²` (polar factor of the cross-covariance) and the
/// root-mean-square residual.
pub fn align_rigid(src: &[DVector<f64>], dst: &[DVector<f64>]) -> Result<(DMatrix<f64>, f64)> {
    if src.len() != dst.len() {
        return Err(Error::DimensionMismatch { expected: src.len(), got: dst.len() });
    }
    let d = src.first().map(|v| v.len()).unwrap_or(0);
    if src.len() < d {
        return Err(Error::TooFewPoints { got: src.len(), dim: d });
    }
    let mut h: DMatrix<f64> = DMatrix::zeros(d, d);
    for (p, q) in src.iter().zip(dst) {
        // H = Σ q pᵀ
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] += q[i] * p[j];
            }
        }
    }
    let svd = h.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smax <= 0.0 || smin / smax < 1e-13 {
        return Err(Error::DegenerateCovariance(if smax > 0.0 { smin / smax } else { 0.0 }));
    }
    let a = svd.u.unwrap() * svd.v_t.unwrap();
    let mut ss = 0.0;
    for (p, q) in src.iter().zip(dst) {
        let moved: DVector<f64> = &a * p;
        ss += (moved - q).norm_squared();
    }
    let rms = (ss / src.len() as f64).sqrt();
    Ok((a, rms))
}

/// `max |AᵀA − I|` entry-wise; diagnostic for alignment outputs.
pub fn orthogonality_defect(a: &DMatrix<f64>) -> f64 {
    let d = a.nrows();
    let g = a.transpose() * a;
    let mut worst = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

pub(crate) fn unit(v: &DVector<f64>) -> DVector<f64> {
    v / v.norm()
}

/// Canonical basis vector `e_k` of `R^d`.
pub fn basis(d: usize, k: usize) -> DVector<f64> {
    let mut v = DVector::zeros(d);
    v[k] = 1.0;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ev(c: &[f64]) -> AmbientVector {
        AmbientVector::euclidean(c.to_vec())
    }

    #[test]
    fn inner_examples() {
        let e1 = ev(&[1.0, 0.0, 0.0, 0.0]);
        let e2 = ev(&[0.0, 1.0, 0.0, 0.0]);
        assert_eq!(inner(&e1, &e1).unwrap(), 1.0);
        assert_eq!(inner(&e1, &e2).unwrap(), 0.0);
        let t = AmbientVector::lorentzian(vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(inner(&t, &t).unwrap(), -1.0);
        assert!(matches!(inner(&e1, &t), Err(Error::SignatureMismatch)));
    }

    #[test]
    fn wedge_examples() {
        // R^3 cross product.
        let w = wedge(&[ev(&[1.0, 0.0, 0.0]), ev(&[0.0, 1.0, 0.0])]).unwrap();
        assert_relative_eq!(w.coords[2], 1.0, epsilon = 1e-15);
        assert_relative_eq!(w.coords.norm(), 1.0, epsilon = 1e-15);
        // R^4: e1 ∧ e2 ∧ e3 = -e4 (cofactor sign of the last column).
        let w = wedge(&[
            ev(&[1.0, 0.0, 0.0, 0.0]),
            ev(&[0.0, 1.0, 0.0, 0.0]),
            ev(&[0.0, 0.0, 1.0, 0.0]),
        ])
        .unwrap();
        assert_relative_eq!(w.coords[3], -1.0, epsilon = 1e-15);
        // Repeated row kills the determinant.
        let w = wedge(&[
            ev(&[1.0, 0.0, 0.0, 0.0]),
            ev(&[1.0, 0.0, 0.0, 0.0]),
            ev(&[0.0, 1.0, 0.0, 0.0]),
        ])
        .unwrap();
        assert_relative_eq!(w.coords.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn orthonormalize_textbook() {
        let frame = OrthoFrame::new(vec![
            ev(&[2.0, 0.0, 0.0, 0.0]),
            ev(&[1.0, 1.0, 0.0, 0.0]),
        ]);
        let out = orthonormalize(&frame).unwrap();
        assert_relative_eq!(out.vectors[0].coords[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(out.vectors[1].coords[1], 1.0, epsilon = 1e-15);
        assert!(out.gram_defect <= 1e-12);
        // Idempotence on an identity frame.
        let id = OrthoFrame::new(vec![ev(&[1.0, 0.0]), ev(&[0.0, 1.0])]);
        let out = orthonormalize(&id).unwrap();
        assert!(out.gram_defect <= 1e-15);
    }

    #[test]
    fn orthonormalize_cleans_small_defect() {
        let frame = OrthoFrame::new(vec![
            ev(&[1.0, 1e-6, 0.0, 0.0]),
            ev(&[0.0, 1.0, 1e-6, 0.0]),
            ev(&[0.0, 0.0, 1.0, 0.0]),
        ]);
        assert!(frame.gram_defect > 1e-7);
        let out = orthonormalize(&frame).unwrap();
        assert!(out.gram_defect <= 1e-12);
    }

    #[test]
    fn orthonormalize_rejects_dependence() {
        let frame = OrthoFrame::new(vec![
            ev(&[1.0, 0.0, 0.0]),
            ev(&[1.0, 1e-9, 0.0]),
        ]);
        assert!(matches!(orthonormalize(&frame), Err(Error::DegenerateFrame(_))));
    }

    #[test]
    fn align_recovers_rotation() {
        let pts: Vec<DVector<f64>> = (0..12)
            .map(|i| {
                let t = i as f64;
                DVector::from_vec(vec![t.sin(), (2.0 * t).cos(), (0.5 * t).sin(), t.cos()])
            })
            .collect();
        // A fixed rotation in two coordinate planes.
        let mut rot = DMatrix::identity(4, 4);
        let (c, s) = (0.6_f64, 0.8_f64);
        rot[(0, 0)] = c;
        rot[(0, 1)] = -s;
        rot[(1, 0)] = s;
        rot[(1, 1)] = c;
        let moved: Vec<DVector<f64>> = pts.iter().map(|p| &rot * p).collect();
        let (a, rms) = align_rigid(&pts, &moved).unwrap();
        assert!(rms < 1e-12);
        assert!((&a - &rot).norm() < 1e-10);
        assert!(orthogonality_defect(&a) <= 1e-10);
        // Cloud against itself.
        let (a, rms) = align_rigid(&pts, &pts).unwrap();
        assert!(rms < 1e-13);
        assert!((&a - DMatrix::<f64>::identity(4, 4)).norm() < 1e-10);
    }

    #[test]
    fn align_rejects_underdetermined() {
        let pts = vec![DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0])];
        assert!(matches!(
            align_rigid(&pts, &pts),
            Err(Error::TooFewPoints { .. })
        ));
    }

    proptest! {
        #[test]
        fn inner_symmetric_bilinear(
            u in prop::collection::vec(-5.0..5.0f64, 4),
            v in prop::collection::vec(-5.0..5.0f64, 4),
            w in prop::collection::vec(-5.0..5.0f64, 4),
            a in -3.0..3.0f64,
        ) {
            for sig in [Signature::Euclidean, Signature::Lorentzian] {
                let mk = |c: &Vec<f64>| AmbientVector { coords: DVector::from_vec(c.clone()), signature: sig };
                let (u, v, w) = (mk(&u), mk(&v), mk(&w));
                let uv = inner(&u, &v).unwrap();
                let vu = inner(&v, &u).unwrap();
                prop_assert!((uv - vu).abs() <= 1e-12);
                let lin = {
                    let mut av_w = v.clone();
                    av_w.coords = &v.coords * a + &w.coords;
                    inner(&u, &av_w).unwrap()
                };
                let rhs = a * uv + inner(&u, &w).unwrap();
                prop_assert!((lin - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
            }
        }

        #[test]
        fn wedge_orthogonal_and_unit(seed in 0u64..500) {
            // Random orthonormal triple in R^4 from Gram-Schmidt on a seeded matrix.
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state as f64 / u64::MAX as f64) * 2.0 - 1.0
            };
            let raw: Vec<DVector<f64>> =
                (0..3).map(|_| DVector::from_vec((0..4).map(|_| next()).collect())).collect();
            // Skip nearly dependent draws.
            let frame = OrthoFrame::new(
                raw.iter()
                    .map(|c| AmbientVector { coords: c.clone(), signature: Signature::Euclidean })
                    .collect(),
            );
            if let Ok(on) = orthonormalize(&frame) {
                let w = wedge(&on.vectors).unwrap();
                for v in &on.vectors {
                    prop_assert!(inner(&w, v).unwrap().abs() <= 1e-10);
                }
                prop_assert!((w.coords.norm() - 1.0).abs() <= 1e-10);
            }
        }
    }
}
