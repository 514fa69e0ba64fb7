//! Exact linear solving over the rationals.
//!
//! One Gauss–Jordan skeleton serves two uses: plain rational systems
//! (kernel bases for the pencil constraint system) and systems whose matrix
//! is rational but whose right-hand side lives in a polynomial ring (the
//! monomial-matching step of the affine decomposition, where symbolic pencil
//! parameters may ride along in the rhs).

use crate::poly::MPoly;
use crate::scalar::ExactScalar;

/// Right-hand-side elements the elimination can carry along.
pub trait RhsElem: Clone {
    fn rhs_zero() -> Self;
    fn rhs_is_zero(&self) -> bool;
    /// `self - c * other`
    fn rhs_sub_mul(&self, other: &Self, c: &ExactScalar) -> Self;
    fn rhs_div(&self, c: &ExactScalar) -> Self;
}

impl RhsElem for ExactScalar {
    fn rhs_zero() -> Self {
        ExactScalar::zero()
    }
    fn rhs_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn rhs_sub_mul(&self, other: &Self, c: &ExactScalar) -> Self {
        self - &(other * c)
    }
    fn rhs_div(&self, c: &ExactScalar) -> Self {
        self / c
    }
}

impl RhsElem for MPoly {
    fn rhs_zero() -> Self {
        MPoly::zero()
    }
    fn rhs_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn rhs_sub_mul(&self, other: &Self, c: &ExactScalar) -> Self {
        self.sub(&other.scale(c))
    }
    fn rhs_div(&self, c: &ExactScalar) -> Self {
        self.scale(&c.recip().expect("nonzero pivot"))
    }
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug)]
pub struct LinSolution<R> {
    pub rank: usize,
    /// `None` when the system is infeasible.
    pub particular: Option<Vec<R>>,
    /// Basis of the kernel of `A` (independent of the rhs).
    pub kernel: Vec<Vec<ExactScalar>>,
}

impl<R> LinSolution<R> {
    pub fn is_unique(&self) -> bool {
        self.particular.is_some() && self.kernel.is_empty()
    }

    pub fn is_infeasible(&self) -> bool {
        self.particular.is_none()
    }
}

/// Solves `A x = b` exactly. `a` is row-major, all rows of equal length.
pub fn solve_linear<R: RhsElem>(a: &[Vec<ExactScalar>], b: &[R]) -> LinSolution<R> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    assert_eq!(b.len(), rows, "rhs length mismatch");
    let mut m: Vec<Vec<ExactScalar>> = a.to_vec();
    let mut rhs: Vec<R> = b.to_vec();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        rhs.swap(r, p);
        let piv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &piv;
        }
        rhs[r] = rhs[r].rhs_div(&piv);
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            let (head, tail) = if i < r {
                let (h, t) = m.split_at_mut(r);
                (&mut h[i], &t[0])
            } else {
                let (h, t) = m.split_at_mut(i);
                (&mut t[0], &h[r])
            };
            for (x, y) in head.iter_mut().zip(tail.iter()) {
                *x = &*x - &(y * &f);
            }
            rhs[i] = rhs[i].rhs_sub_mul(&rhs[r], &f);
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let rank = r;

    // Infeasibility: zero row with nonzero rhs.
    let infeasible = (rank..rows).any(|i| !rhs[i].rhs_is_zero());

    let particular = if infeasible {
        None
    } else {
        let mut x: Vec<R> = (0..cols).map(|_| R::rhs_zero()).collect();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = rhs[row].clone();
        }
        Some(x)
    };

    let mut kernel = Vec::new();
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; cols];
        for &pc in &pivot_cols {
            v[pc] = true;
        }
        v
    };
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut vec = vec![ExactScalar::zero(); cols];
        vec[free] = ExactScalar::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            vec[pc] = -m[row][free].clone();
        }
        kernel.push(vec);
    }

    LinSolution {
        rank,
        particular,
        kernel,
    }
}

/// Kernel basis of a homogeneous system.
pub fn kernel_basis(a: &[Vec<ExactScalar>]) -> Vec<Vec<ExactScalar>> {
    let rhs = vec![ExactScalar::zero(); a.len()];
    solve_linear(a, &rhs).kernel
}

/// Rank of a rational matrix.
pub fn rank(a: &[Vec<ExactScalar>]) -> usize {
    let rhs = vec![ExactScalar::zero(); a.len()];
    solve_linear(a, &rhs).rank
}
