//! Pauli words: parsing, products, signatures and dense matrices.
use graphlind::pauli::{multiply_words, symmetric_word, word_to_dense, PauliWord};
use graphlind::oracle::WordSignature;

fn main() -> graphlind::Result<()> {
    let n = 5;
    let a = PauliWord::parse("X1 Y2 Z4", n)?;
    let b = PauliWord::parse("Z1 Y2 X5", n)?;
    let (phase, c) = multiply_words(&a, &b)?;
    println!("({a}) * ({b}) = {} ({c})", phase.value());
    println!("weight {} counts (X, Y, Z) = {:?}", c.weight(), c.counts());

    let w = symmetric_word(1, 2, 1, n)?;
    let sig = WordSignature::of(&w);
    println!("{w}: signature n={} m={} l={}", sig.n, sig.m, sig.l);

    let dense = word_to_dense(&PauliWord::parse("Y1 Z2", 2)?)?;
    println!("Y1 Z2 as a 4x4 matrix:{dense:.1}");
    Ok(())
}
