use super::matrix::{flat_index, multi_index, OpMatrix};
use super::ring::Ring;
use super::signature::GradingSignature;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SlotError {
    #[error("slot {slot} out of range for {slots} slots")]
    OutOfRange { slot: usize, slots: usize },
    #[error("slot {0} targeted twice")]
    Collision(usize),
    #[error("operator on {op} slots cannot be placed on {targets} targets")]
    Arity { op: usize, targets: usize },
    #[error("operator dimension {op} does not match signature dimension {sig}")]
    Dimension { op: usize, sig: usize },
}

/// Sign relating ordinary entries to graded coefficients:
/// `ord(I,J) = s·coef(I,J)` with `s = (-1)^{Σ_{a<b} ([i_b]+[j_b])[j_a]}`.
pub fn koszul_sign(sig: &GradingSignature, rows: &[usize], cols: &[usize]) -> bool {
    let g = sig.gradings();
    let mut acc = 0u8;
    let mut tail = 0u8;
    // Σ_a [j_a]·Σ_{b>a}([i_b]+[j_b]), accumulated from the right.
    for a in (0..rows.len()).rev() {
        acc ^= g[cols[a]] & tail;
        tail ^= g[rows[a]] ^ g[cols[a]];
    }
    acc == 1
}

/// Converts between ordinary entries and graded coefficients (the map is an involution).
pub fn to_coefficients<T: Ring>(op: &OpMatrix<T>, sig: &GradingSignature) -> OpMatrix<T> {
    if !sig.is_graded() {
        return op.clone();
    }
    let (d, k) = (op.d(), op.slots());
    let entries: Vec<_> = op
        .entries()
        .map(|(r, c, v)| {
            let neg = koszul_sign(sig, &multi_index(d, k, r), &multi_index(d, k, c));
            (r, c, if neg { v.neg() } else { v.clone() })
        })
        .collect();
    OpMatrix::from_triplets(d, k, entries).with_labels(op.labels().to_vec())
}

pub fn from_coefficients<T: Ring>(op: &OpMatrix<T>, sig: &GradingSignature) -> OpMatrix<T> {
    to_coefficients(op, sig)
}

/// Graded permutation `Σ (-1)^{[j]} E_ij ⊗ E_ji` (coefficient form), returned in
/// ordinary form where it reads `Σ (-1)^{[i][j]} E_ij ⊗ E_ji`.
pub fn super_permutation<T: Ring>(sig: &GradingSignature) -> OpMatrix<T> {
    let d = sig.dim();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let v = if sig.grading(i) & sig.grading(j) == 1 { T::from_int(-1) } else { T::one() };
            entries.push((flat_index(d, &[i, j]), flat_index(d, &[j, i]), v));
        }
    }
    OpMatrix::from_triplets(d, 2, entries)
}

fn check_slot<T>(op: &OpMatrix<T>, slot: usize, sig: &GradingSignature) -> Result<(), SlotError>
where
    T: Ring,
{
    if op.d() != sig.dim() {
        return Err(SlotError::Dimension { op: op.d(), sig: sig.dim() });
    }
    if slot >= op.slots() {
        return Err(SlotError::OutOfRange { slot, slots: op.slots() });
    }
    Ok(())
}

/// Partial supertrace `Σ_j (-1)^{[j]} ⟨j|·|j⟩` over `slot`.
pub fn supertrace<T: Ring>(op: &OpMatrix<T>, slot: usize, sig: &GradingSignature) -> Result<OpMatrix<T>, SlotError> {
    check_slot(op, slot, sig)?;
    let (d, k) = (op.d(), op.slots());
    let coef = to_coefficients(op, sig);
    let mut entries = Vec::new();
    for (r, c, v) in coef.entries() {
        let mut ri = multi_index(d, k, r);
        let mut ci = multi_index(d, k, c);
        if ri[slot] != ci[slot] {
            continue;
        }
        let j = ri.remove(slot);
        ci.remove(slot);
        let v = if sig.grading(j) == 1 { v.neg() } else { v.clone() };
        entries.push((flat_index(d, &ri), flat_index(d, &ci), v));
    }
    let mut labels = op.labels().to_vec();
    labels.remove(slot);
    let out = OpMatrix::from_triplets(d, k - 1, entries).with_labels(labels);
    Ok(from_coefficients(&out, sig))
}

/// Twisted transpose `Aᵗ = V⁻¹ A^{st} V` on `slot`. `A^{st}` is the graded
/// coefficient transpose `E_ij → (-1)^{[i]([i]+[j])} E_ji`, which is the plain
/// transpose for ungraded spaces or even operators on that slot.
pub fn twisted_transpose<T: Ring>(op: &OpMatrix<T>, slot: usize, sig: &GradingSignature) -> Result<OpMatrix<T>, SlotError> {
    check_slot(op, slot, sig)?;
    let (d, k) = (op.d(), op.slots());
    let coef = to_coefficients(op, sig);
    let entries: Vec<_> = coef
        .entries()
        .map(|(r, c, v)| {
            let mut ri = multi_index(d, k, r);
            let mut ci = multi_index(d, k, c);
            let (i, j) = (ri[slot], ci[slot]);
            ri[slot] = j;
            ci[slot] = i;
            let neg = sig.grading(i) & (sig.grading(i) ^ sig.grading(j)) == 1;
            (flat_index(d, &ri), flat_index(d, &ci), if neg { v.neg() } else { v.clone() })
        })
        .collect();
    let st = from_coefficients(&OpMatrix::from_triplets(d, k, entries), sig);
    let v = embed(&crossing_matrix::<T>(sig), &[slot], k, sig)?;
    let vinv = embed(&crossing_matrix_inv::<T>(sig), &[slot], k, sig)?;
    Ok(vinv.mul(&st).mul(&v).with_labels(op.labels().to_vec()))
}

/// The crossing matrix V on one slot.
pub fn crossing_matrix<T: Ring>(sig: &GradingSignature) -> OpMatrix<T> {
    OpMatrix::from_triplets(sig.dim(), 1, sig.v_entries().into_iter().map(|(r, c, v)| (r, c, T::from_int(v.into()))))
}

pub fn crossing_matrix_inv<T: Ring>(sig: &GradingSignature) -> OpMatrix<T> {
    OpMatrix::from_triplets(sig.dim(), 1, sig.v_inv_entries().into_iter().map(|(r, c, v)| (r, c, T::from_int(v.into()))))
}

/// Places a k-slot operator on `targets` of a `total`-slot space (identity elsewhere),
/// with the Koszul signs needed so products of embedded operators agree with direct
/// graded computation. Factor `a` of `op` lands on slot `targets[a]`.
pub fn embed<T: Ring>(op: &OpMatrix<T>, targets: &[usize], total: usize, sig: &GradingSignature) -> Result<OpMatrix<T>, SlotError> {
    let (d, k) = (op.d(), op.slots());
    if d != sig.dim() {
        return Err(SlotError::Dimension { op: d, sig: sig.dim() });
    }
    if targets.len() != k {
        return Err(SlotError::Arity { op: k, targets: targets.len() });
    }
    let mut used = vec![false; total];
    for &t in targets {
        if t >= total {
            return Err(SlotError::OutOfRange { slot: t, slots: total });
        }
        if std::mem::replace(&mut used[t], true) {
            return Err(SlotError::Collision(t));
        }
    }
    let others: Vec<usize> = (0..total).filter(|s| !used[*s]).collect();
    let n_rest = d.pow(others.len() as u32);
    let g = sig.gradings();
    let graded = sig.is_graded();
    let mut entries = Vec::with_capacity(op.nnz() * n_rest);
    for (r, c, v) in op.entries() {
        let ri = multi_index(d, k, r);
        let ci = multi_index(d, k, c);
        let mut neg = graded && koszul_sign(sig, &ri, &ci);
        if graded {
            for a in 0..k {
                for b in a + 1..k {
                    if targets[a] > targets[b] {
                        let pa = g[ri[a]] ^ g[ci[a]];
                        let pb = g[ri[b]] ^ g[ci[b]];
                        neg ^= pa & pb == 1;
                    }
                }
            }
        }
        let mut full_r = vec![0; total];
        let mut full_c = vec![0; total];
        for a in 0..k {
            full_r[targets[a]] = ri[a];
            full_c[targets[a]] = ci[a];
        }
        for rest in 0..n_rest {
            let vals = multi_index(d, others.len(), rest);
            for (s, x) in others.iter().zip(&vals) {
                full_r[*s] = *x;
                full_c[*s] = *x;
            }
            let s = neg ^ (graded && koszul_sign(sig, &full_r, &full_c));
            let val = if s { v.neg() } else { v.clone() };
            entries.push((flat_index(d, &full_r), flat_index(d, &full_c), val));
        }
    }
    Ok(OpMatrix::from_triplets(d, total, entries))
}

/// Graded tensor product `A ⊗ B` of two one-slot operators.
pub fn graded_kron<T: Ring>(a: &OpMatrix<T>, b: &OpMatrix<T>, sig: &GradingSignature) -> Result<OpMatrix<T>, SlotError> {
    let ea = embed(a, &[0], 2, sig)?;
    let eb = embed(b, &[1], 2, sig)?;
    Ok(ea.mul(&eb))
}

/// Exchanges the two slots of a two-slot operator: `P·A·P`.
pub fn swap_slots<T: Ring>(op: &OpMatrix<T>, sig: &GradingSignature) -> OpMatrix<T> {
    let p = super_permutation::<T>(sig);
    p.mul(op).mul(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_tensor::scalar::ExactScalar;
    use crate::graded_tensor::signature::BasisOrder;

    type M = OpMatrix<ExactScalar>;

    fn unit(d: usize, i: usize, j: usize) -> M {
        OpMatrix::from_triplets(d, 1, [(i, j, ExactScalar::one())])
    }

    #[test]
    fn permutation_entries_match_hand_expansion() {
        let sig = GradingSignature::slmn(1, 1);
        let p = super_permutation::<ExactScalar>(&sig);
        let coef = to_coefficients(&p, &sig);
        let e21 = flat_index(2, &[1, 0]);
        let e12 = flat_index(2, &[0, 1]);
        let e22 = flat_index(2, &[1, 1]);
        assert_eq!(coef.get(e21, e12), ExactScalar::int(1));
        assert_eq!(coef.get(e12, e21), ExactScalar::int(-1));
        assert_eq!(coef.get(e22, e22), ExactScalar::int(-1));
    }

    #[test]
    fn ungraded_permutation_is_swap() {
        let sig = GradingSignature::sl(2);
        let p = super_permutation::<ExactScalar>(&sig);
        let expect = OpMatrix::from_triplets(
            2,
            2,
            [(0, 0, ExactScalar::one()), (1, 2, ExactScalar::one()), (2, 1, ExactScalar::one()), (3, 3, ExactScalar::one())],
        );
        assert_eq!(p, expect);
    }

    #[test]
    fn supertrace_examples() {
        let sig = GradingSignature::slmn(2, 1);
        let id = M::identity(3, 2);
        let st = supertrace(&id, 0, &sig).unwrap();
        assert_eq!(st, M::scalar(3, 1, ExactScalar::int(1)));
        let p = super_permutation::<ExactScalar>(&sig);
        for slot in 0..2 {
            assert_eq!(supertrace(&p, slot, &sig).unwrap(), M::identity(3, 1));
        }
        let e11 = unit(3, 0, 0);
        let ee = graded_kron(&e11, &e11, &sig).unwrap();
        assert_eq!(supertrace(&ee, 0, &sig).unwrap(), e11);
        assert!(supertrace(&ee, 2, &sig).is_err());
    }

    #[test]
    fn twisted_transpose_examples() {
        let sig = GradingSignature::sl(2);
        let e12 = unit(2, 0, 1);
        assert_eq!(twisted_transpose(&e12, 0, &sig).unwrap(), e12);
        assert_eq!(twisted_transpose(&M::identity(2, 1), 0, &sig).unwrap(), M::identity(2, 1));
        let sig_m = GradingSignature::new(2, 0, BasisOrder::Distinguished, -1).unwrap();
        let a = OpMatrix::from_triplets(
            2,
            1,
            [(0, 0, ExactScalar::int(1)), (0, 1, ExactScalar::int(2)), (1, 0, ExactScalar::int(3)), (1, 1, ExactScalar::int(5))],
        );
        let tt = twisted_transpose(&twisted_transpose(&a, 0, &sig_m).unwrap(), 0, &sig_m).unwrap();
        assert_eq!(tt, a);
    }

    #[test]
    fn braid_relation() {
        for sig in [GradingSignature::sl(2), GradingSignature::slmn(1, 1), GradingSignature::slmn(2, 1)] {
            let p = super_permutation::<ExactScalar>(&sig);
            let p12 = embed(&p, &[0, 1], 3, &sig).unwrap();
            let p23 = embed(&p, &[1, 2], 3, &sig).unwrap();
            assert_eq!(p12.mul(&p23).mul(&p12), p23.mul(&p12).mul(&p23), "{sig}");
            let p13 = embed(&p, &[0, 2], 3, &sig).unwrap();
            assert_eq!(p12.mul(&p23).mul(&p12), p13, "{sig}");
        }
    }

    #[test]
    fn embed_errors_and_identity() {
        let sig = GradingSignature::sl(2);
        let id = M::identity(2, 2);
        assert_eq!(embed(&id, &[2, 0], 3, &sig).unwrap(), M::identity(2, 3));
        assert!(matches!(embed(&id, &[1, 1], 3, &sig), Err(SlotError::Collision(1))));
        assert!(matches!(embed(&id, &[0, 3], 3, &sig), Err(SlotError::OutOfRange { .. })));
    }

    #[test]
    fn embedded_reversed_permutation_is_permutation() {
        // P₂₁ = P₁₂ as an operator.
        let sig = GradingSignature::slmn(1, 2);
        let p = super_permutation::<ExactScalar>(&sig);
        assert_eq!(embed(&p, &[1, 0], 2, &sig).unwrap(), p);
    }
}
