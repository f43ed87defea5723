use fquasi::corpus::cyclic;
use fquasi::equivalence::roundtrip_fq;
use fquasi::{build_fq, rho, sigma, ArithmeticForm, Endo, PointedFQ};

#[test]
fn library_example() -> fquasi::Result<()> {
    // x·y = 2x + 3y on Z5
    let form = ArithmeticForm::new(
        cyclic(5),
        Endo::new(vec![0, 2, 4, 1, 3]),
        Endo::new(vec![0, 3, 1, 4, 2]),
        0,
    );
    let q = build_fq(&form)?;
    let p = PointedFQ::new(q, 0)?;
    let module = rho(&p, None)?;
    assert_eq!(sigma(&module)?, p);
    assert!(roundtrip_fq(&p).pass);
    Ok(())
}
