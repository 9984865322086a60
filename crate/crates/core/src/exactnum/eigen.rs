use super::matrix::{ExactMatrix, Matrix};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Eigen and generalized eigenspace bases for one joint character.
#[derive(Clone, Debug)]
pub struct JointSpace {
    pub eigen: Vec<Vec<Scalar>>,
    pub generalized: Vec<Vec<Scalar>>,
}

/// For each character (one eigenvalue per operator) return the joint eigenspace
/// ∩ ker(A − c) and the joint generalized eigenspace ∩ ker(A − c)^dim.
pub fn joint_generalized_eigenspaces(
    ops: &[ExactMatrix],
    chars: &[Vec<Scalar>],
) -> Result<Vec<JointSpace>> {
    let Some(first) = ops.first() else {
        return Ok(chars.iter().map(|_| JointSpace { eigen: vec![], generalized: vec![] }).collect());
    };
    let n = first.rows();
    for a in ops {
        if !a.is_square() || a.rows() != n {
            return Err(Error::Invalid("operators must be square of equal size".into()));
        }
    }
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            if !a.commutator(b).is_zero() {
                return Err(Error::NotCommutative);
            }
        }
    }
    let mut out = Vec::new();
    for ch in chars {
        if ch.len() != ops.len() {
            return Err(Error::Invalid("character length differs from family size".into()));
        }
        let shifted: Vec<ExactMatrix> = ops
            .iter()
            .zip(ch)
            .map(|(a, c)| a.sub(&Matrix::identity(n).scale(c)))
            .collect();
        let eigen = Matrix::vstack(&shifted).kernel();
        let powered: Vec<ExactMatrix> = shifted.iter().map(|s| s.pow(n)).collect();
        let generalized = Matrix::vstack(&powered).kernel();
        out.push(JointSpace { eigen, generalized });
    }
    Ok(out)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::scalar::int;

    #[test]
    fn jordan_block() {
        let j = ExactMatrix::from_int_rows(&[&[5, 1], &[0, 5]]);
        let r = joint_generalized_eigenspaces(&[j], &[vec![int(5)]]).unwrap();
        assert_eq!((r[0].eigen.len(), r[0].generalized.len()), (1, 2));
    }

    #[test]
    fn identity_and_missing_char() {
        let i3 = ExactMatrix::identity(3);
        let r = joint_generalized_eigenspaces(&[i3], &[vec![int(1)]]).unwrap();
        assert_eq!((r[0].eigen.len(), r[0].generalized.len()), (3, 3));
        let d = ExactMatrix::from_int_rows(&[&[1, 0], &[0, 2]]);
        let r = joint_generalized_eigenspaces(&[d], &[vec![int(3)]]).unwrap();
        assert_eq!((r[0].eigen.len(), r[0].generalized.len()), (0, 0));
    }

    #[test]
    fn rejects_noncommuting() {
        let a = ExactMatrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        let b = ExactMatrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        assert_eq!(
            joint_generalized_eigenspaces(&[a, b], &[vec![int(0), int(0)]]).unwrap_err(),
            Error::NotCommutative
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
