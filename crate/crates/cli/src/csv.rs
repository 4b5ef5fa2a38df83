//! Byte-stable CSV emission.
//!
//! Numbers are printed like C's `%.17g`: 17 significant digits, trailing
//! zeros dropped, exponent form outside `1e-4 <= |x| < 1e17`. No locale is
//! consulted. Non-finite values print as `inf`, `-inf` and `nan`.

use std::fmt::Write;

use sirsvk::sweep::{LabeledTrajectory, SweepRecord};
use sirsvk::{State, Trajectory};

pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }

    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();

    if !(-4..17).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        let tail = tail.trim_end_matches('0');
        let dot = if tail.is_empty() { "" } else { "." };
        let esign = if exp < 0 { '-' } else { '+' };
        return format!("{sign}{head}{dot}{tail}e{esign}{:02}", exp.abs());
    }

    let (int_part, frac_part) = if exp >= 0 {
        let split = exp as usize + 1;
        (digits[..split].to_string(), digits[split..].to_string())
    } else {
        ("0".to_string(), format!("{}{digits}", "0".repeat((-exp - 1) as usize)))
    };
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

fn push_state(out: &mut String, x: &State) {
    for value in x.to_array() {
        out.push(',');
        out.push_str(&format_number(value));
    }
}

/// `t,S,I,R,V`
pub fn trajectory(traj: &Trajectory) -> String {
    let mut out = String::from("t,S,I,R,V\n");
    for (t, x) in traj.iter() {
        out.push_str(&format_number(t));
        push_state(&mut out, x);
        out.push('\n');
    }
    out
}

/// `t,model,S,I,R,V`, grouped by model in the given order.
pub fn comparison(runs: &[LabeledTrajectory]) -> String {
    let mut out = String::from("t,model,S,I,R,V\n");
    for run in runs {
        for (t, x) in run.trajectory.iter() {
            let _ = write!(out, "{},{}", format_number(t), run.model.label());
            push_state(&mut out, x);
            out.push('\n');
        }
    }
    out
}

/// `swept,t,S,I,R,V`: one block of rows per swept value.
pub fn kappa_trajectories<'a>(runs: impl IntoIterator<Item = (f64, &'a Trajectory)>) -> String {
    let mut out = String::from("swept,t,S,I,R,V\n");
    for (swept, traj) in runs {
        let swept = format_number(swept);
        for (t, x) in traj.iter() {
            let _ = write!(out, "{swept},{}", format_number(t));
            push_state(&mut out, x);
            out.push('\n');
        }
    }
    out
}

/// `swept,<observable...>`. Column names come from the first record.
pub fn records(records: &[SweepRecord]) -> String {
    let mut out = String::from("swept");
    if let Some(first) = records.first() {
        for (name, _) in &first.observables {
            out.push(',');
            out.push_str(name);
        }
    }
    out.push('\n');
    for rec in records {
        out.push_str(&format_number(rec.swept));
        for (_, value) in &rec.observables {
            out.push(',');
            out.push_str(&format_number(*value));
        }
        out.push('\n');
    }
    out
}

/// Two-column `quantity,value` table.
pub fn key_values<'a>(rows: impl IntoIterator<Item = (&'a str, String)>) -> String {
    let mut out = String::from("quantity,value\n");
    for (key, value) in rows {
        let _ = writeln!(out, "{key},{value}");
    }
    out
}
