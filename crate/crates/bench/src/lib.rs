//! Shared inputs for the criterion benches.

use hamlat_core::decomposition::{conic_class, e3_prime, e8_prime};
use hamlat_core::{Dictionary, DivisorClass};

/// The classes the irreducibility benches decompose, with short labels.
pub fn search_targets() -> Vec<(&'static str, DivisorClass)> {
    vec![("e8_prime", e8_prime()), ("e3_prime", e3_prime()), ("conic", conic_class())]
}

/// Every basis image of the two main dictionaries.
pub fn dictionary_images() -> Vec<DivisorClass> {
    [Dictionary::Hat7, Dictionary::Tilde8]
        .iter()
        .flat_map(|d| d.map().images().to_vec())
        .collect()
}

/// A dense class on `X_8` with mixed multiplicities.
pub fn sample_class() -> DivisorClass {
    DivisorClass::from_tuple(7, &[3, 2, 2, 2, 2, 2, 2, 1])
}
