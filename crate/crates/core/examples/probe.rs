use nalgebra::{Complex, DMatrix};
use std::time::Instant;

fn main() {
    type C64 = Complex<f64>;
    let n = 3;
    let mut comp = DMatrix::<C64>::zeros(n, n);
    comp[(1, 0)] = C64::new(1.0, 0.0);
    comp[(2, 1)] = C64::new(1.0, 0.0);
    comp[(0, 2)] = C64::new(0.109375, 0.0);
    comp[(1, 2)] = C64::new(-0.78125, 0.0);
    comp[(2, 2)] = C64::new(1.625, 0.0);
    match comp.clone().eigenvalues() {
        Some(ev) => println!("complex eigenvalues: {:?}", ev.as_slice()),
        None => println!("complex eigenvalues FAILED"),
    }

    let m = 51;
    let a = DMatrix::<C64>::from_fn(m, m, |i, j| {
        C64::new(((i * 37 + j * 11) % 17) as f64 / 17.0 - 0.5,
                 ((i * 13 + j * 29) % 23) as f64 / 23.0 - 0.5)
    });
    let t0 = Instant::now();
    let reps = 100;
    let mut acc = 0.0;
    for _ in 0..reps {
        let svd = a.clone().svd(true, true);
        acc += svd.singular_values[0];
    }
    println!("complex svd 51x51: {:.3} ms (acc {:.3})", t0.elapsed().as_secs_f64() / reps as f64 * 1e3, acc);

    let b = DMatrix::<f64>::from_row_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
    let qr = b.clone().qr();
    let mut rhs = nalgebra::DVector::<f64>::from_vec(vec![1.0, 1.0, 1.0]);
    qr.q_tr_mul(&mut rhs);
    println!("q_tr_mul ok: {:?}, r = {:?}", rhs.as_slice(), qr.r().as_slice());

    let bc = DMatrix::<C64>::from_fn(4, 3, |i, j| C64::new((i + j) as f64, (i as f64) - (j as f64)));
    let qrc = bc.clone().qr();
    let mut rhsc = nalgebra::DVector::<C64>::from_element(4, C64::new(1.0, 0.0));
    qrc.q_tr_mul(&mut rhsc);
    println!("complex qr ok, r diag: {:?}", (0..3).map(|i| qrc.r()[(i, i)]).collect::<Vec<_>>());

    let s = DMatrix::<f64>::from_fn(18, 18, |i, j| 1.0 / (1.0 + (i as f64 - j as f64).abs()));
    let t1 = Instant::now();
    for _ in 0..100 { let _ = s.clone().symmetric_eigen(); }
    println!("symmetric_eigen 18x18: {:.3} ms", t1.elapsed().as_secs_f64() / 100.0 * 1e3);

    let ar = DMatrix::<f64>::from_fn(51, 51, |i, j| ((i * 37 + j * 11) % 17) as f64 / 17.0 - 0.5);
    let t2 = Instant::now();
    for _ in 0..100 { let _ = ar.clone().svd(true, true); }
    println!("real svd 51x51: {:.3} ms", t2.elapsed().as_secs_f64() / 100.0 * 1e3);
}
