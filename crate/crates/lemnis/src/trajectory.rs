//! CSV dump of integrated states: `t, x1, y1, …, xn, yn, vx1, vy1, …`.

use std::io;

use lemnis_core::SystemState;

use crate::report::format_real;

pub fn header(n: usize) -> Vec<String> {
    let mut h = vec!["t".to_owned()];
    for i in 1..=n {
        h.push(format!("x{i}"));
        h.push(format!("y{i}"));
    }
    for i in 1..=n {
        h.push(format!("vx{i}"));
        h.push(format!("vy{i}"));
    }
    h
}

pub fn write_csv<W: io::Write>(out: W, states: &[SystemState]) -> csv::Result<()> {
    let n = states.first().map_or(0, |s| s.bodies.len());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(n))?;
    for s in states {
        let mut row = vec![format_real(s.time)];
        for b in &s.bodies {
            row.push(format_real(b.position.x));
            row.push(format_real(b.position.y));
        }
        for b in &s.bodies {
            row.push(format_real(b.velocity.x));
            row.push(format_real(b.velocity.y));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
