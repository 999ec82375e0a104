//! Closed-form expectations for the five built-in rate cases.
use graphlind::oracle::{builtin_case, expectation, reduced_density, Time, WordSignature};

fn main() -> graphlind::Result<()> {
    let n = 32;
    let yy = WordSignature::new(0, 2, 0, n)?;
    let z = WordSignature::new(0, 0, 1, n)?;
    let stab = WordSignature::new(1, 0, n - 1, n)?;
    println!("case  alpha  beta  gamma   t    <YY>       <Z>        <X Z^(N-1)>");
    for case in 1..=5 {
        let r = builtin_case(case)?;
        for t in [0.0, 0.5, 2.0] {
            println!(
                "{case}     {:.2}   {:.2}  {:.2}   {t:.1}  {:+.6}  {:+.6}  {:+.6}",
                r.alpha,
                r.beta,
                r.gamma,
                expectation(yy, t, &r)?,
                expectation(z, t, &r)?,
                expectation(stab, t, &r)?
            );
        }
        println!("      steady state <Z> = {:+.6}", expectation(z, Time::SteadyState, &r)?);
    }
    let rho2 = reduced_density(2, 1.0, &builtin_case(4)?, n)?;
    println!("two-site reduced matrix, case 4, t = 1:{rho2:.4}");
    Ok(())
}
