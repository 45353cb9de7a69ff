use super::{GroupRingElement, Presentation, Word};

/// Fox free derivative `∂w/∂x_j`.
///
/// For `w = l_1 ⋯ l_m` the result is `Σ_i (l_1 ⋯ l_{i-1}) · ∂l_i/∂x_j` with
/// `∂x_j/∂x_j = 1` and `∂x_j^{-1}/∂x_j = -x_j^{-1}`.
pub fn fox_derivative(w: &Word, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w.letters() {
        if l.unsigned_abs() as usize == j {
            if l > 0 {
                out.add_term(Word::new(prefix.iter().copied()), 1);
            } else {
                out.add_term(Word::new(prefix.iter().copied().chain([l])), -1);
            }
        }
        prefix.push(l);
    }
    out
}

/// The full Fox Jacobian: entry `(i, j)` is `∂r_i/∂x_{j+1}`.
pub fn fox_jacobian(p: &Presentation) -> Vec<Vec<GroupRingElement>> {
    p.relators()
        .iter()
        .map(|r| (1..=p.generator_count()).map(|j| fox_derivative(r, j)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    #[test]
    fn defining_identities() {
        let x1 = parse_word("x1").unwrap();
        assert_eq!(fox_derivative(&x1, 1), GroupRingElement::one());
        assert!(fox_derivative(&x1, 2).is_zero());
        let x1inv = parse_word("X1").unwrap();
        assert_eq!(fox_derivative(&x1inv, 1), GroupRingElement::monomial(-1, x1inv.clone()));
        assert!(fox_derivative(&Word::identity(), 1).is_zero());
    }

    #[test]
    fn trefoil_relator_by_hand() {
        // r = x1 x2 x1 x2^-1 x1^-1 x2^-1; the x1 letters sit at positions 1, 3
        // and (inverted) 5, giving 1 + x1 x2 - x1 x2 x1 x2^-1 x1^-1.
        let r = parse_word("x1*x2*x1*X2*X1*X2").unwrap();
        let mut expected = GroupRingElement::one();
        expected.add_term(parse_word("x1*x2").unwrap(), 1);
        expected.add_term(parse_word("x1*x2*x1*X2*X1").unwrap(), -1);
        assert_eq!(fox_derivative(&r, 1), expected);
    }
}
