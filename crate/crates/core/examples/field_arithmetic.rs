//! Arithmetic in GF(2^k): the modulus, a few products, and the cubing and
//! fifth-power maps that feed the generator lift.
//!
//! ```text
//! cargo run --example field_arithmetic -- 5
//! ```

use tfreg::gf2k::FieldCtx;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: u32 = std::env::args().nth(1).map_or(Ok(4), |s| s.parse())?;
    let f = FieldCtx::new(k)?;
    println!("GF(2^{k}) with modulus {:#b}", f.modulus());

    let a = f.elem(0b10 % f.order())?;
    let b = f.elem((f.order() - 1).min(0b1011))?;
    println!("a = {:#x}, b = {:#x}", a.bits(), b.bits());
    println!("a + b = {:#x}", f.add(a, b).bits());
    println!("a * b = {:#x}", f.mul(a, b).bits());

    // a^(2^k - 1) = 1 for every nonzero a
    let order = f.order() as u64;
    let units = f.elements().filter(|e| !e.is_zero()).all(|e| f.pow(e, order - 1).bits() == 1);
    println!("every unit satisfies a^(2^k-1) = 1: {units}");

    println!("{:>6} {:>6} {:>6}", "a", "a^3", "a^5");
    for e in f.elements().take(8) {
        println!("{:>6x} {:>6x} {:>6x}", e.bits(), f.pow(e, 3).bits(), f.pow(e, 5).bits());
    }
    Ok(())
}
