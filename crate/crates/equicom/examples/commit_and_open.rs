//! The basic flow: set up a key, commit to a value, open the commitment.
//!
//! ```bash
//! cargo run -p equicom --example commit_and_open
//! ```

use equicom::commitment::{commit, setup_honest, verify, Opening};
use equicom::group::fixed_test_params;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() {
    // The toy group p=23, q=11, g=2 keeps every number readable.
    let group = fixed_test_params();
    println!("group: p={}, q={}, g={}", group.p(), group.q(), group.g());

    // An honest key: B is hashed into the group, so nobody knows dlog(B).
    let key = setup_honest(&group, b"commit-and-open example");
    println!("blinding base B = {}", key.blinding_base());

    let mut rng = ChaCha20Rng::seed_from_u64(7);
    let value = group.scalar_from_u64(5);
    let (commitment, opening) = commit(&key, &value, &mut rng);
    println!(
        "commitment to x={} with blinding r={}: Z = {}",
        opening.value(),
        opening.blinding(),
        commitment.element()
    );

    // Opening reveals (x, r); the receiver recomputes g^x B^r.
    assert!(verify(&key, &commitment, &opening));
    println!("opening (x, r) verifies: accepted");

    // Any other claimed value fails.
    let forged = Opening::new(group.scalar_from_u64(6), opening.blinding().clone());
    assert!(!verify(&key, &commitment, &forged));
    println!("forged opening with x={} is rejected", forged.value());
}
