#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;

/// Hand-written expressions at n = 2 covering every atom and operator.
pub const CORPUS: [&str; 50] = [
    "0",
    "1",
    "-3/4",
    "c",
    "c^2 - 1",
    "(c + 1)^-1",
    "x1",
    "x2^3",
    "x1*x2 - x2*x1",
    "d1",
    "d2^2",
    "d1*x1",
    "x1*d1 - d1*x1",
    "y1",
    "y2",
    "y1*y2",
    "y1*y2 - y2*y1",
    "y1^2 + y2^2",
    "del",
    "del^-1",
    "del^-2 * x1",
    "del^-1 * del",
    "d1 - c * del^-1 * (1 - s(1,2))",
    "s(1,2)",
    "s(2,1) * x1",
    "s(1,2)*d1*s(1,2)",
    "e",
    "e_",
    "e * e",
    "e * e_",
    "e * y1 * e",
    "e * (y1^2 + y2^2) * e",
    "e * x1 * x2 * e",
    "e * del^-1 * x1 * e",
    "e_ * del * e",
    "del^-1 * (y1^2 + y2^2) * e_ * del",
    "(y1 + y2) * (x1 + x2)",
    "c * y1 * x1 - x1 * y1",
    "(1 - c)^2 * d1 * del^-1",
    "1/2*x1*d2 + 2/3*x2*d1",
    "-(x1 - x2)^2 * del^-2",
    "(c^2 - c)^-1 * (x1 + c*x2)",
    "y1 * s(1,2) * y2",
    "del * y1 * del^-1",
    "(x1 + x2)^3",
    "d1^2 * x1^2",
    "-y1",
    "-(e - e_)",
    "x1*x2*d1*d2*s(1,2)",
    "(2*c + 1)*(3*c - 1)^-1*del^-1*d1",
];

/// A random well-formed expression for rank 2.
pub fn random_expr(rng: &mut StdRng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_atom(rng);
    }
    match rng.gen_range(0..4) {
        0 => {
            let k = rng.gen_range(2..=3);
            let parts: Vec<String> = (0..k).map(|_| random_expr(rng, depth - 1)).collect();
            let mut s = String::new();
            if rng.gen_bool(0.2) {
                s.push('-');
            }
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    s += if rng.gen_bool(0.5) { " + " } else { " - " };
                }
                s += p;
            }
            format!("({s})")
        }
        1 => {
            let k = rng.gen_range(2..=3);
            let parts: Vec<String> = (0..k).map(|_| random_expr(rng, depth - 1)).collect();
            parts.join(" * ")
        }
        2 => format!("({})^{}", random_expr(rng, depth - 1), rng.gen_range(0..=2)),
        _ => random_atom(rng),
    }
}

fn random_atom(rng: &mut StdRng) -> String {
    let i = rng.gen_range(1..=2);
    match rng.gen_range(0..12) {
        0 => format!("({})", rng.gen_range(-5..=5)),
        1 => format!("({}/{})", rng.gen_range(-5..=5), rng.gen_range(1..=4)),
        2 => "c".into(),
        3 => format!("x{i}"),
        4 => format!("y{i}"),
        5 => format!("d{i}"),
        6 => format!("del^{}", rng.gen_range(-2..=2)),
        7 => "s(1,2)".into(),
        8 => "e".into(),
        9 => "e_".into(),
        10 => format!("(c + {})^-1", rng.gen_range(1..=3)),
        _ => format!("x{i}^{}", rng.gen_range(0..=3)),
    }
}
