//! Fixtures shared by the criterion benches.

use magrand_core::{generate, GeneratorKind, GeneratorSpec, Mag, MagSignature};

pub fn fixture(sizes: &[usize], kind: GeneratorKind, seed: u64) -> Mag {
    let sig = MagSignature::new(sizes.to_vec()).expect("valid signature");
    generate(&GeneratorSpec::new(sig, kind, seed).expect("valid spec")).expect("generates")
}

pub fn uniform(sizes: &[usize], seed: u64) -> Mag {
    fixture(sizes, GeneratorKind::UniformHalf, seed)
}
