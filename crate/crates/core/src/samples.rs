//! Small algebras used by tests, benches and the bundled corpus.

use std::sync::Arc;

use crate::algebra::{Arrow, BoundAlgebra, Quiver, Relation};
use crate::exactla::Field;

pub fn linear_a(n: usize, field: Field) -> Arc<BoundAlgebra> {
    BoundAlgebra::build(Quiver::linear_a(n), Vec::new(), field).expect("A_n is finite dimensional")
}

/// 1 -> 2 over Q.
pub fn a2() -> Arc<BoundAlgebra> {
    linear_a(2, Field::Rational)
}

/// 1 -> 2 -> 3 over Q.
pub fn a3() -> Arc<BoundAlgebra> {
    linear_a(3, Field::Rational)
}

/// The Auslander algebra of kA2: 1 -a-> 2 -b-> 3 with ba = 0.
pub fn aus_a2_over(field: Field) -> Arc<BoundAlgebra> {
    let q = Quiver::new(
        3,
        vec![
            Arrow {
                name: "a".into(),
                source: 0,
                target: 1,
            },
            Arrow {
                name: "b".into(),
                source: 1,
                target: 2,
            },
        ],
    )
    .expect("valid quiver");
    BoundAlgebra::build(q, vec![Relation::zero_path(vec![0, 1], field)], field).expect("finite dimensional")
}

pub fn aus_a2() -> Arc<BoundAlgebra> {
    aus_a2_over(Field::Rational)
}

/// One vertex with a loop x, optionally with x^n = 0.
pub fn loop_quiver(nilpotency: Option<usize>, field: Field) -> crate::Result<Arc<BoundAlgebra>> {
    let q = Quiver::new(
        1,
        vec![Arrow {
            name: "x".into(),
            source: 0,
            target: 0,
        }],
    )?;
    let rels = nilpotency
        .map(|n| vec![Relation::zero_path(vec![0; n], field)])
        .unwrap_or_default();
    BoundAlgebra::build(q, rels, field)
}
