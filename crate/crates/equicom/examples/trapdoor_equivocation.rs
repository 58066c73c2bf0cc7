//! What the trapdoor buys: reopening one commitment to any value.
//!
//! ```bash
//! cargo run -p equicom --example trapdoor_equivocation
//! ```

use equicom::commitment::{commit, equivocate, setup_trapdoor, verify};
use equicom::group::generate_params;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    let group = generate_params(64, b"equivocation example").expect("group generates");
    let mut rng = ChaCha20Rng::seed_from_u64(42);

    // setup_trapdoor keeps b = dlog_g(B). Whoever holds it is not bound by
    // their commitments.
    let (key, trapdoor) = setup_trapdoor(&group, &mut rng);
    println!("B = {} (trapdoor b kept private)", key.blinding_base());

    let original = group.scalar_from_u64(1_000);
    let (commitment, opening) = commit(&key, &original, &mut rng);
    println!("committed to {}: Z = {}", original, commitment.element());

    // Later, open the very same Z as a completely different value.
    for target in [0u64, 7, 999_999] {
        let new_value = group.scalar_from_u64(target);
        let reopened = equivocate(&trapdoor, &opening, &new_value);
        assert!(verify(&key, &commitment, &reopened));
        println!(
            "reopened Z as x'={} with r'={}: accepted",
            reopened.value(),
            reopened.blinding()
        );
    }

    // Equivocating back to the original value returns the original opening.
    let target = opening.value().clone();
    let round_trip = equivocate(&trapdoor, &opening, &target);
    assert_eq!(round_trip, opening);
    println!(
        "equivocating back to {} restores the original opening",
        original
    );
}
