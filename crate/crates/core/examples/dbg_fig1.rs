use ratlab_core::*;
fn main() {
    eprintln!("parsing...");
    let x = CertifiedReal::fig1_constant();
    eprintln!("parsed, bits = {}", x.bits());
    eprintln!("expanding...");
    let cf = cf_expand(&x, 311).unwrap();
    eprintln!("expanded, len = {}", cf.len());
    let alpha = decimal_to_rational("1").unwrap();
    eprintln!("walking...");
    let tb = theta_bar_unverified(&cf, &alpha, 11).unwrap();
    eprintln!("walked, entries = {}", tb.entries.len());
    let pairs = tb.pairs_f64();
    eprintln!("pairs: {:?}", &pairs[..3]);
}
