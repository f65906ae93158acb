//! Property tests for the truncated ladder-operator algebra.

use num_complex::Complex64;
use proptest::prelude::*;

use fwm_blockade::{annihilation, creation, identity, number, FockOperator, HilbertSpace};

fn spaces() -> impl Strategy<Value = HilbertSpace> {
    (1usize..=5, 1usize..=4, 1usize..=4)
        .prop_map(|(a, b, c)| HilbertSpace::new([a, b, c]).expect("dims are positive"))
}

fn max_abs(op: &FockOperator) -> f64 {
    op.matrix().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The annihilation operator has exactly one kind of nonzero entry:
    /// <.., n-1, ..| a |.., n, ..> = sqrt(n) on the swept mode, with every
    /// other occupation unchanged.
    #[test]
    fn annihilation_lowers_one_mode_by_one(space in spaces(), mode in 0usize..3) {
        let a = annihilation(space, mode).unwrap();
        let matrix = a.matrix();
        for row in 0..space.total_dim() {
            for col in 0..space.total_dim() {
                let bra = space.occupation(row);
                let ket = space.occupation(col);
                let lowers = (0..3).all(|m| {
                    let expected = ket[m] - usize::from(m == mode && ket[m] > 0);
                    bra[m] == expected
                }) && ket[mode] > 0;
                let expected = if lowers {
                    Complex64::from((ket[mode] as f64).sqrt())
                } else {
                    Complex64::ZERO
                };
                prop_assert!((matrix[(row, col)] - expected).norm() < 1e-12);
            }
        }
    }

    /// On a truncated mode of dimension d, [a, a†] = I - d P where P projects
    /// onto the topmost level: the commutator is canonical except at the
    /// truncation edge.
    #[test]
    fn commutator_is_canonical_below_the_edge(space in spaces(), mode in 0usize..3) {
        let a = annihilation(space, mode).unwrap();
        let adag = creation(space, mode).unwrap();
        let commutator = &(&a * &adag) - &(&adag * &a);
        let top = space.dim(mode) - 1;
        for row in 0..space.total_dim() {
            for col in 0..space.total_dim() {
                let expected = if row != col {
                    Complex64::ZERO
                } else if space.occupation(row)[mode] == top {
                    Complex64::from(-(top as f64))
                } else {
                    Complex64::ONE
                };
                prop_assert!((commutator.matrix()[(row, col)] - expected).norm() < 1e-12);
            }
        }
    }

    /// Ladder operators acting on different modes commute, whatever the
    /// Kronecker embedding order.
    #[test]
    fn operators_on_distinct_modes_commute(space in spaces(), first in 0usize..3, shift in 1usize..3) {
        let second = (first + shift) % 3;
        let ops = [annihilation(space, first).unwrap(), creation(space, second).unwrap()];
        let forward = &ops[0] * &ops[1];
        let backward = &ops[1] * &ops[0];
        prop_assert!(max_abs(&(&forward - &backward)) < 1e-12);
    }

    /// The adjoint is an involution and reverses products.
    #[test]
    fn adjoint_involutes_and_reverses(space in spaces(), mode_x in 0usize..3, mode_y in 0usize..3) {
        let x = annihilation(space, mode_x).unwrap();
        let y = creation(space, mode_y).unwrap();
        prop_assert!(max_abs(&(&x.adjoint().adjoint() - &x)) < 1e-12);
        let product_adjoint = (&x * &y).adjoint();
        let reversed = &y.adjoint() * &x.adjoint();
        prop_assert!(max_abs(&(&product_adjoint - &reversed)) < 1e-12);
    }

    /// a†a equals the number operator, and the identity commutes with
    /// everything.
    #[test]
    fn number_operator_is_creation_times_annihilation(space in spaces(), mode in 0usize..3) {
        let a = annihilation(space, mode).unwrap();
        let built = &a.adjoint() * &a;
        let direct = number(space, mode).unwrap();
        prop_assert!(max_abs(&(&built - &direct)) < 1e-12);
        let eye = identity(space);
        prop_assert!(max_abs(&(&(&eye * &a) - &(&a * &eye))) < 1e-12);
    }
}
