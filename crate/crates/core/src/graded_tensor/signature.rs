use std::fmt;

use num_rational::BigRational;

use super::scalar::ExactScalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisOrder {
    /// Bosonic indices first, fermionic after.
    Distinguished,
    /// Palindromic grading, needed by the conjugate (SNP) chains.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("empty space: M+N must be at least 1")]
    Empty,
    #[error("theta0 must be +1 or -1, got {0}")]
    BadTheta(i8),
    #[error("no palindromic grading for sl({0}|{1}): M and N are both odd")]
    NoSymmetricLayout(usize, usize),
    #[error("theta0={theta0} is forbidden for sl({m}|{n}) in this basis: the middle crossing entry would need v^2={need}")]
    ForbiddenTheta { m: usize, n: usize, theta0: i8, need: i8 },
}

/// Graded space data for sl(M|N): grading of each basis index plus crossing data.
///
/// The crossing matrix is `V = Σ v_i E_{i, d-1-i}` with `v_i = 1` on the first half
/// and `v_i = θ₀(-1)^{[i]}` on the second, so `V² = θ₀·diag((-1)^{[i]})`. For
/// ungraded spaces this is the usual `V² = θ₀·𝕀`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradingSignature {
    m: usize,
    n: usize,
    basis: BasisOrder,
    theta0: i8,
    grading: Vec<u8>,
    v: Vec<i8>,
}

impl GradingSignature {
    pub fn new(m: usize, n: usize, basis: BasisOrder, theta0: i8) -> Result<Self, SignatureError> {
        let d = m + n;
        if d == 0 {
            return Err(SignatureError::Empty);
        }
        if theta0 != 1 && theta0 != -1 {
            return Err(SignatureError::BadTheta(theta0));
        }
        let grading = match basis {
            BasisOrder::Distinguished => {
                let mut g = vec![0u8; m];
                g.extend(std::iter::repeat_n(1, n));
                g
            }
            BasisOrder::Symmetric => symmetric_grading(m, n)?,
        };
        let v: Vec<i8> = (0..d)
            .map(|i| if i < d.div_ceil(2) { 1 } else { theta0 * parity_sign(grading[i]) })
            .collect();
        let crossing_used = basis == BasisOrder::Symmetric || n == 0 || m == 0;
        if d % 2 == 1 && crossing_used {
            // Middle entry pairs with itself: v² must equal θ₀(-1)^{[mid]}.
            let mid = d / 2;
            let need = theta0 * parity_sign(grading[mid]);
            if need != 1 {
                return Err(SignatureError::ForbiddenTheta { m, n, theta0, need });
            }
        }
        Ok(GradingSignature { m, n, basis, theta0, grading, v })
    }

    /// Ungraded sl(N) with θ₀ = +1.
    pub fn sl(n: usize) -> Self {
        Self::new(n, 0, BasisOrder::Distinguished, 1).expect("valid sl(N)")
    }

    /// sl(M|N) in the distinguished basis, θ₀ = +1.
    pub fn slmn(m: usize, n: usize) -> Self {
        Self::new(m, n, BasisOrder::Distinguished, 1).expect("valid sl(M|N)")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m + self.n
    }

    pub fn basis(&self) -> BasisOrder {
        self.basis
    }

    pub fn theta0(&self) -> i8 {
        self.theta0
    }

    pub fn is_graded(&self) -> bool {
        self.grading.contains(&1)
    }

    /// Grading `[i]` of the 0-based basis index `i`.
    pub fn grading(&self, i: usize) -> u8 {
        self.grading[i]
    }

    pub fn gradings(&self) -> &[u8] {
        &self.grading
    }

    /// `(-1)^{[i]}`.
    pub fn sign(&self, i: usize) -> i8 {
        parity_sign(self.grading[i])
    }

    /// ρ = θ₀(M−N)/2.
    pub fn rho(&self) -> BigRational {
        BigRational::new(
            (i64::from(self.theta0) * (self.m as i64 - self.n as i64)).into(),
            2.into(),
        )
    }

    pub fn rho_scalar(&self) -> ExactScalar {
        ExactScalar::real(self.rho())
    }

    /// Non-zero entries of V as `(row, col, value)`.
    pub fn v_entries(&self) -> Vec<(usize, usize, i8)> {
        let d = self.dim();
        (0..d).map(|i| (i, d - 1 - i, self.v[i])).collect()
    }

    /// Non-zero entries of V⁻¹.
    pub fn v_inv_entries(&self) -> Vec<(usize, usize, i8)> {
        let d = self.dim();
        // v_i = ±1, so the inverse of the antidiagonal is its transpose.
        (0..d).map(|i| (d - 1 - i, i, self.v[i])).collect()
    }

    /// True when the grading reads the same from both ends.
    pub fn is_palindromic(&self) -> bool {
        let d = self.dim();
        (0..d).all(|i| self.grading[i] == self.grading[d - 1 - i])
    }
}

fn parity_sign(g: u8) -> i8 {
    if g == 0 {
        1
    } else {
        -1
    }
}

/// Palindromic grading with the pseudo-vacuum index bosonic whenever M is even:
/// `M/2` bosons, the N fermions, `M/2` bosons. For odd M the fermions are split
/// around the bosonic block instead.
fn symmetric_grading(m: usize, n: usize) -> Result<Vec<u8>, SignatureError> {
    if m == 0 || n == 0 {
        return Ok(if m == 0 { vec![1; n] } else { vec![0; m] });
    }
    let (outer, inner, outer_g, inner_g) = if m.is_multiple_of(2) {
        (m / 2, n, 0u8, 1u8)
    } else if n.is_multiple_of(2) {
        (n / 2, m, 1u8, 0u8)
    } else {
        return Err(SignatureError::NoSymmetricLayout(m, n));
    };
    let mut g = vec![outer_g; outer];
    g.extend(std::iter::repeat_n(inner_g, inner));
    g.extend(std::iter::repeat_n(outer_g, outer));
    Ok(g)
}

impl fmt::Debug for GradingSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for GradingSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.basis {
            BasisOrder::Distinguished => "dist",
            BasisOrder::Symmetric => "sym",
        };
        if self.n == 0 {
            write!(f, "sl({})[{}, θ₀={}]", self.m, b, self.theta0)
        } else {
            write!(f, "sl({}|{})[{}, θ₀={}]", self.m, self.n, b, self.theta0)
        }
    }
}
