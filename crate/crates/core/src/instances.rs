//! Small reference structures used throughout tests and examples.

use crate::{AdditionTable, AssocMode, Element, GammaSemiring};

/// The one-element structure.
pub fn trivial() -> GammaSemiring {
    zero_operation(AdditionTable::max(1), 3)
}

/// `({0,1}, OR, μ = n-way AND)` with a single Γ-value.
pub fn boolean_and(n: usize) -> GammaSemiring {
    GammaSemiring::from_fn(n, 1, AdditionTable::or(), AssocMode::PaperEnds, |_, xs| {
        xs.iter().all(|&x| x == 1) as Element
    })
    .expect("boolean AND is well-shaped")
}

/// `({0,1,2}, max, μ(x, y, z) = x if all arguments are nonzero, else 0)`.
pub fn guarded_first_projection() -> GammaSemiring {
    GammaSemiring::from_fn(
        3,
        1,
        AdditionTable::max(3),
        AssocMode::PaperEnds,
        |_, xs| {
            if xs.contains(&0) {
                0
            } else {
                xs[0]
            }
        },
    )
    .expect("guarded projection is well-shaped")
}

/// All products zero.
pub fn zero_operation(add: AdditionTable, n: usize) -> GammaSemiring {
    GammaSemiring::from_fn(n, 1, add, AssocMode::PaperEnds, |_, _| 0)
        .expect("zero operation is well-shaped")
}

/// The three-element ternary example over `{0, a, b}` with `a + a = b`,
/// `b` absorbing under addition, and `{x y z} = b` when `x = y = z = a`,
/// `0` when any argument is `0`, `a` otherwise. Element `a` is 1, `b` is 2.
///
/// Exhaustive checking shows this table is not distributive.
pub fn three_element_illustration() -> GammaSemiring {
    let add = AdditionTable::from_fn(3, |x, y| match (x, y) {
        (0, v) | (v, 0) => v,
        _ => 2,
    })
    .expect("well-shaped");
    GammaSemiring::from_fn(3, 1, add, AssocMode::PaperEnds, |_, xs| {
        if xs.contains(&0) {
            0
        } else if xs.iter().all(|&x| x == 1) {
            2
        } else {
            1
        }
    })
    .expect("well-shaped")
}
