//! Hermitian eigendecomposition.
//!
//! Complex Householder reduction to real symmetric tridiagonal form
//! followed by the implicit-shift QL iteration, after the Algol procedures
//! tred2/tql2 (Bowdler, Martin, Reinsch, Wilkinson) and their EISPACK
//! descendants. The projectors and invariant states handled by this crate
//! have heavily degenerate spectra, which this classic iteration resolves
//! reliably.

use crate::scalar::{c_re, from_f64, Scalar, C};
use nalgebra::{ComplexField, DMatrix};

/// Eigendecomposition of a hermitian matrix: `values` in decreasing order,
/// `vectors` holding the matching orthonormal eigenvectors as columns.
pub struct HermitianEigen<T: Scalar> {
    pub values: Vec<T>,
    pub vectors: DMatrix<C<T>>,
}

/// Decomposes a hermitian matrix. Only the hermitian part of the input is
/// referenced in exact arithmetic; small anti-hermitian noise is averaged
/// away by the reduction.
pub fn hermitian_eigen<T: Scalar>(mat: &DMatrix<C<T>>) -> HermitianEigen<T> {
    let n = mat.nrows();
    assert_eq!(n, mat.ncols(), "hermitian eigen requires a square matrix");
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        };
    }
    let mut a = mat.clone();
    let mut q = DMatrix::<C<T>>::identity(n, n);
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];

    // Householder reduction to tridiagonal form with complex subdiagonal.
    for k in 0..n.saturating_sub(2) {
        let mut norm_sq = T::zero();
        for i in (k + 1)..n {
            norm_sq += a[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm <= T::default_epsilon() * from_f64::<T>(1e-3) {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.modulus() > T::zero() {
            x0 / c_re(x0.modulus())
        } else {
            c_re(T::one())
        };
        let alpha = -phase * c_re(norm);

        let mut u = vec![C::new(T::zero(), T::zero()); n];
        for i in (k + 1)..n {
            u[i] = a[(i, k)];
        }
        u[k + 1] -= alpha;
        let mut unorm_sq = T::zero();
        for ui in u.iter().take(n).skip(k + 1) {
            unorm_sq += ui.norm_sqr();
        }
        if unorm_sq <= T::zero() {
            continue;
        }
        let inv = c_re(T::one() / unorm_sq.sqrt());
        for ui in u.iter_mut().take(n).skip(k + 1) {
            *ui *= inv;
        }

        // A <- H A H with H = I - 2uu†: A - 2uv† - 2vu† + 4c uu†, v = Au
        let mut v = vec![C::new(T::zero(), T::zero()); n];
        for i in (k + 1)..n {
            let mut acc = C::new(T::zero(), T::zero());
            for j in (k + 1)..n {
                acc += a[(i, j)] * u[j];
            }
            v[i] = acc;
        }
        let mut c_uv = C::new(T::zero(), T::zero());
        for i in (k + 1)..n {
            c_uv += u[i].conj() * v[i];
        }
        let two = from_f64::<T>(2.0);
        let four = from_f64::<T>(4.0);
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let corr = u[i] * v[j].conj() + v[i] * u[j].conj();
                a[(i, j)] = a[(i, j)] - corr * c_re(two) + u[i] * u[j].conj() * c_uv * c_re(four);
            }
        }
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in (k + 2)..n {
            a[(i, k)] = C::new(T::zero(), T::zero());
            a[(k, i)] = C::new(T::zero(), T::zero());
        }

        // Q <- Q H
        for r in 0..n {
            let mut acc = C::new(T::zero(), T::zero());
            for j in (k + 1)..n {
                acc += q[(r, j)] * u[j];
            }
            let acc = acc * c_re(two);
            for j in (k + 1)..n {
                q[(r, j)] -= acc * u[j].conj();
            }
        }
    }

    // Phase-rotate the subdiagonal onto the real axis.
    let mut phi = vec![c_re(T::one()); n];
    for k in 0..n - 1 {
        let beta = a[(k + 1, k)];
        let m = beta.modulus();
        e[k] = m;
        phi[k + 1] = if m > T::zero() {
            phi[k] * beta / c_re(m)
        } else {
            phi[k]
        };
    }
    for (k, p) in phi.iter().enumerate() {
        d[k] = a[(k, k)].re;
        for r in 0..n {
            q[(r, k)] *= *p;
        }
    }

    tql2(&mut d, &mut e, &mut q);

    // descending order
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| d[y].partial_cmp(&d[x]).expect("finite eigenvalues"));
    let values: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| q[(r, order[c])]);
    HermitianEigen { values, vectors }
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix with
/// complex accumulated transformations. `d` holds the diagonal, `e[l]` the
/// subdiagonal coupling l and l+1 (and `e[n-1]` is scratch).
fn tql2<T: Scalar>(d: &mut [T], e: &mut [T], v: &mut DMatrix<C<T>>) {
    let n = d.len();
    if n == 0 {
        return;
    }
    e[n - 1] = T::zero();

    let mut f = T::zero();
    let mut tst1 = T::zero();
    let eps = T::default_epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0usize;
            loop {
                iter += 1;
                if iter > 1000 {
                    // accept the current approximation; the residual is on
                    // the order of eps * tst1 anyway
                    break;
                }

                // implicit shift
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (from_f64::<T>(2.0) * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for item in d.iter_mut().take(n).skip(l + 2) {
                    *item -= h;
                }
                f += h;

                // implicit QL sweep
                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    for k in 0..n {
                        let t = v[(k, i + 1)];
                        v[(k, i + 1)] = t * c_re(c) + v[(k, i)] * c_re(s);
                        v[(k, i)] = v[(k, i)] * c_re(c) - t * c_re(s);
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = T::zero();
    }
}
