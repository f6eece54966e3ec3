//! Draw from both Gibbs samplers at a few learning rates and show how the
//! posterior spread responds.

use gpc::experiments::{gen_linreg_data, SynthConfig};
use gpc::model::{Dataset, LinearRegression, Model, ResponseKind, SvmClassifier};
use gpc::numkit::{std_normal, RandomStream};

fn spread(model: &dyn Model, data: &Dataset, eta: f64) -> gpc::Result<Vec<f64>> {
    let pset = model.simulate(eta, &data.full_view(), 3000, 500, &mut RandomStream::new(5, 0))?;
    Ok((0..pset.dim())
        .map(|k| {
            let x = pset.coordinate(k);
            let m = x.iter().sum::<f64>() / x.len() as f64;
            (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
        })
        .collect())
}

fn main() -> gpc::Result<()> {
    let lin = gen_linreg_data(&SynthConfig { n: 100, seed: 4, ..Default::default() })?;
    let mut rng = RandomStream::new(6, 0);
    let rows: Vec<Vec<f64>> = (0..100).map(|_| vec![std_normal(&mut rng), std_normal(&mut rng)]).collect();
    let y = rows
        .iter()
        .map(|r| if r[0] - 0.5 * r[1] + 0.5 * std_normal(&mut rng) > 0.0 { 1.0 } else { -1.0 })
        .collect();
    let svm = Dataset::new(y, &rows, vec!["a".into(), "b".into()], ResponseKind::Binary)?;

    for eta in [0.1, 0.5, 1.0, 2.0] {
        let l = spread(&LinearRegression::default(), &lin, eta)?;
        let s = spread(&SvmClassifier::default(), &svm, eta)?;
        println!("eta {eta:4.1}  linreg sd {l:.3?}  svm sd {s:.3?}");
    }
    Ok(())
}
