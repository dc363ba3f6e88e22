//! A small catalog of classic constant-length substitutions and directive
//! sequences, used throughout the test suite and convenient for exploration.

use crate::alphabet::Alphabet;
use crate::directive::DirectiveSequence;
use crate::morphism::Morphism;

fn ab01() -> Alphabet {
    Alphabet::new(["0", "1"]).expect("static alphabet")
}

fn ab01bar() -> Alphabet {
    Alphabet::new(["0", "1", "0b", "1b"]).expect("static alphabet")
}

fn abc() -> Alphabet {
    Alphabet::new(["a", "b", "c"]).expect("static alphabet")
}

/// theta: 0 -> 011, 1 -> 001.
pub fn theta() -> Morphism {
    Morphism::from_names(&ab01(), &ab01(), &["0 1 1", "0 0 1"]).expect("static")
}

/// vartheta on {0, 1, 0b, 1b}: 0 -> 0 1b 1, 1 -> 0 0b 1, 0b -> 0b 1 1b,
/// 1b -> 0b 0 1b. Its shift erases to the theta shift when bars are dropped.
pub fn vartheta() -> Morphism {
    Morphism::from_names(
        &ab01bar(),
        &ab01bar(),
        &["0 1b 1", "0 0b 1", "0b 1 1b", "0b 0 1b"],
    )
    .expect("static")
}

/// rho: the bar-forgetting follower of theta; 0 and 0b share an image, as do
/// 1 and 1b, so rho is not injective on letters.
pub fn rho() -> Morphism {
    Morphism::from_names(
        &ab01bar(),
        &ab01(),
        &["0 1 1", "0 0 1", "0 1 1", "0 0 1"],
    )
    .expect("static")
}

/// The quasi-recognizable but not recognizable sequence (rho, vartheta, vartheta, ...).
pub fn alpha() -> DirectiveSequence {
    DirectiveSequence::new(vec![rho()], vec![vartheta()]).expect("static")
}

/// Stationary (theta, theta, ...).
pub fn theta_seq() -> DirectiveSequence {
    DirectiveSequence::stationary(theta()).expect("static")
}

/// tau of the height-table example: a -> aab, b -> abc, c -> aac.
pub fn tau_s5() -> Morphism {
    Morphism::from_names(&abc(), &abc(), &["a a b", "a b c", "a a c"]).expect("static")
}

/// theta of the height-table example: a -> aba, b -> bac, c -> bab.
pub fn theta_s5() -> Morphism {
    Morphism::from_names(&abc(), &abc(), &["a b a", "b a c", "b a b"]).expect("static")
}

/// (tau_s5, theta_s5, theta_s5, ...): level 0 has height 1, deeper levels 2.
pub fn tau_theta_s5() -> DirectiveSequence {
    DirectiveSequence::new(vec![tau_s5()], vec![theta_s5()]).expect("static")
}

/// Length-5 substitution with height 2: a -> abaca, b -> babac, c -> cabab.
pub fn height2() -> Morphism {
    Morphism::from_names(&abc(), &abc(), &["a b a c a", "b a b a c", "c a b a b"])
        .expect("static")
}

pub fn height2_seq() -> DirectiveSequence {
    DirectiveSequence::stationary(height2()).expect("static")
}

/// tau of the suspension example: a -> ab, b -> bc, c -> ac (length 2).
pub fn tau2() -> Morphism {
    Morphism::from_names(&abc(), &abc(), &["a b", "b c", "a c"]).expect("static")
}

/// (tau2, height2, height2, ...): not torsion-free, the prime 2 divides only
/// the first length.
pub fn ext46() -> DirectiveSequence {
    DirectiveSequence::new(vec![tau2()], vec![height2()]).expect("static")
}

/// Durand's theta: a -> acb, b -> bab, c -> cbc.
pub fn durand_theta() -> Morphism {
    Morphism::from_names(&abc(), &abc(), &["a c b", "b a b", "c b c"]).expect("static")
}

/// Durand's tau: a -> abc, b -> acb, c -> aac.
pub fn durand_tau() -> Morphism {
    Morphism::from_names(&abc(), &abc(), &["a b c", "a c b", "a a c"]).expect("static")
}

pub fn durand_theta_seq() -> DirectiveSequence {
    DirectiveSequence::stationary(durand_theta()).expect("static")
}

pub fn durand_tau_seq() -> DirectiveSequence {
    DirectiveSequence::stationary(durand_tau()).expect("static")
}

/// Alternating cycle (theta_D, tau_D, theta_D, tau_D, ...).
pub fn durand_mixed_seq() -> DirectiveSequence {
    DirectiveSequence::new(vec![], vec![durand_theta(), durand_tau()]).expect("static")
}

/// Thue-Morse: 0 -> 01, 1 -> 10.
pub fn thue_morse() -> Morphism {
    Morphism::from_names(&ab01(), &ab01(), &["0 1", "1 0"]).expect("static")
}

pub fn thue_morse_seq() -> DirectiveSequence {
    DirectiveSequence::stationary(thue_morse()).expect("static")
}

/// A two-letter primitive morphism of the given length:
/// 0 -> 0^(len-1) 1, 1 -> 1^(len-1) 0.
pub fn length_only(len: usize) -> Morphism {
    assert!(len >= 2);
    let a = ab01();
    let mut img0 = vec![0u32; len - 1];
    img0.push(1);
    let mut img1 = vec![1u32; len - 1];
    img1.push(0);
    Morphism::new(a.clone(), a, vec![img0, img1]).expect("static")
}

/// Factorial-style lengths truncated to an eventually periodic sequence:
/// prefix lengths 2, 6, 24 and cycle length 120.
pub fn factorial() -> DirectiveSequence {
    DirectiveSequence::new(
        vec![length_only(2), length_only(6), length_only(24)],
        vec![length_only(120)],
    )
    .expect("static")
}
