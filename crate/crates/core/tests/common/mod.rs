//! Random well-typed programs for the metatheory and property suites.
//!
//! Programs are built from binding templates whose annotations hold by
//! construction, given lower bounds tracked for the integer streams in
//! scope. Every template avoids overflow for at least a few hundred
//! instants.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FUNS: [(&str, &str); 3] = [
    ("inc", "let inc (a : {v : int | v >= 0}) : {v : int | v >= 1} = a + 1;;"),
    ("big", "let big ((a, b) : int * int) : {v : int | v >= a and v >= b} = let c = a >= b in if c then a else b;;"),
    ("half", "let half (a : {v : float | v >= 0.0}) : {v : float | v >= 0.0} = a * 0.5;;"),
];

#[derive(Clone)]
struct IntStream {
    name: String,
    /// Proven lower bound, if any.
    low: Option<i64>,
}

struct Gen {
    rng: ChaCha8Rng,
    out: String,
    ints: Vec<IntStream>,
    floats: Vec<String>,
    next: usize,
}

impl Gen {
    fn fresh(&mut self, prefix: &str) -> String {
        self.next += 1;
        format!("{prefix}{}", self.next)
    }

    fn pick(&mut self) -> IntStream {
        self.ints.choose(&mut self.rng).expect("an int stream").clone()
    }

    fn pick_low(&mut self, min: i64) -> Option<IntStream> {
        let xs: Vec<IntStream> = self.ints.iter().filter(|s| s.low.is_some_and(|l| l >= min)).cloned().collect();
        xs.choose(&mut self.rng).cloned()
    }

    fn lit(&mut self) -> i64 {
        self.rng.gen_range(-3..=5)
    }

    fn push(&mut self, line: String, s: Option<IntStream>) {
        self.out.push_str(&line);
        self.out.push('\n');
        if let Some(s) = s {
            self.ints.push(s);
        }
    }

    /// Adds one binding to the spine.
    fn item(&mut self) {
        loop {
            let choice = self.rng.gen_range(0..14);
            if self.try_item(choice) {
                return;
            }
        }
    }

    fn try_item(&mut self, choice: u32) -> bool {
        match choice {
            0 => {
                let s = self.fresh("k");
                let c = self.lit();
                self.push(format!("let {s} : {{v : int | always (v = {c})}} = {c} in"), Some(IntStream { name: s, low: Some(c) }));
            }
            1 => {
                let s = self.fresh("x");
                let a = self.lit();
                let step = match self.pick_low(0) {
                    Some(y) if self.rng.gen_bool(0.5) => y.name,
                    _ => self.rng.gen_range(0..=3).to_string(),
                };
                self.push(
                    format!("let rec {s} : {{v : int | always (v >= {a})}} = {a} fby {s} + {step} in"),
                    Some(IntStream { name: s, low: Some(a) }),
                );
            }
            2 => {
                let (Some(y), Some(z)) = (self.pick_low(-100), self.pick_low(-100)) else { return false };
                let s = self.fresh("s");
                let l = y.low.unwrap() + z.low.unwrap();
                self.push(
                    format!("let {s} : {{v : int | always (v >= {l})}} = {} + {} in", y.name, z.name),
                    Some(IntStream { name: s, low: Some(l) }),
                );
            }
            3 => {
                if self.ints.is_empty() {
                    return false;
                }
                let (y, z) = (self.pick(), self.pick());
                let c = self.fresh("c");
                let s = self.fresh("m");
                let low = y.low.zip(z.low).map(|(a, b)| a.max(b));
                self.push(format!("let {c} = {} >= {} in", y.name, z.name), None);
                self.push(
                    format!("let {s} : {{v : int | always (v >= {} and v >= {})}} = if {c} then {} else {} in", y.name, z.name, y.name, z.name),
                    Some(IntStream { name: s, low }),
                );
            }
            4 => {
                let s = self.fresh("b");
                self.push(
                    format!("let rec {s} : {{v : int | always (v = 0 or v = 1)}} = 0 fby 1 - {s} in"),
                    Some(IntStream { name: s, low: Some(0) }),
                );
            }
            5 => {
                let Some(y) = self.pick_low(-100) else { return false };
                let s = self.fresh("d");
                let c = self.lit();
                let l = y.low.unwrap();
                self.push(
                    format!("let {s} : {{v : int | v = {c} and next always (v >= {l})}} = {c} fby {} in", y.name),
                    Some(IntStream { name: s, low: Some(c.min(l)) }),
                );
            }
            6 => {
                let s = self.fresh("n");
                let t = self.fresh("t");
                self.push(
                    format!(
                        "let rec {s} : {{v : int | always (v >= 0)}} = (let {t} : {{v : int | always (v >= 0)}} = 0 fby 1 in (0 fby {s} + {t})) in"
                    ),
                    Some(IntStream { name: s, low: Some(0) }),
                );
            }
            7 => {
                let Some(y) = self.pick_low(0) else { return false };
                let s = self.fresh("i");
                self.push(
                    format!("let {s} : {{v : int | always (v >= 1)}} = inc ({}) in", y.name),
                    Some(IntStream { name: s, low: Some(1) }),
                );
            }
            8 => {
                if self.ints.is_empty() {
                    return false;
                }
                let (y, z) = (self.pick(), self.pick());
                let s = self.fresh("u");
                let c = self.rng.gen_range(0..=2);
                self.push(format!("let {s} = {} * {c} - {} in", y.name, z.name), Some(IntStream { name: s, low: None }));
            }
            9 => {
                let s = self.fresh("f");
                let d = ["0.5", "0.25", "1.0", "0.0"].choose(&mut self.rng).unwrap();
                self.push(format!("let rec {s} : {{v : float | always (v >= 0.0)}} = 0.0 fby {s} + {d} in"), None);
                self.floats.push(s);
            }
            10 => {
                let s = self.fresh("p");
                let t = self.fresh("q");
                self.push(
                    format!(
                        "let rec ({s}, {t}) : {{(a, b) : int * int | always (a >= 0 and b >= 1)}} = (0, 1) fby ({t}, {s} + 1) in"
                    ),
                    Some(IntStream { name: s.clone(), low: Some(0) }),
                );
                self.ints.push(IntStream { name: t, low: Some(1) });
            }
            11 => {
                if self.ints.is_empty() {
                    return false;
                }
                let y = self.pick();
                let s = self.fresh("r");
                self.push(format!("let {s} = {} models robot_get \"{s}\" in", y.name), Some(IntStream { name: s.clone(), low: None }));
            }
            12 => {
                if self.ints.is_empty() {
                    return false;
                }
                let (y, z) = (self.pick(), self.pick());
                let c = self.fresh("c");
                let s = self.fresh("e");
                let k = self.lit();
                // the fby in the untaken branch still advances
                self.push(format!("let {c} = {} > {} in", y.name, z.name), None);
                self.push(format!("let {s} = if {c} then ({k} fby {}) else {} in", y.name, z.name), Some(IntStream { name: s, low: None }));
            }
            _ => {
                if self.floats.is_empty() {
                    return false;
                }
                let f = self.floats.choose(&mut self.rng).unwrap().clone();
                let s = self.fresh("h");
                self.push(format!("let {s} : {{v : float | always (v >= 0.0)}} = half ({f}) in"), None);
                if self.ints.len() >= 2 && self.rng.gen_bool(0.5) {
                    let (y, z) = (self.pick(), self.pick());
                    let s = self.fresh("g");
                    let low = y.low.zip(z.low).map(|(a, b)| a.max(b));
                    let bound = match low {
                        Some(l) => format!("always (v >= {l})"),
                        None => "true".into(),
                    };
                    self.push(format!("let {s} : {{v : int | {bound}}} = big ({}, {}) in", y.name, z.name), Some(IntStream { name: s, low }));
                }
            }
        }
        true
    }
}

/// Source text of a random well-typed program with `items` bindings.
pub fn program_with(seed: u64, items: usize) -> String {
    let mut g = Gen { rng: ChaCha8Rng::seed_from_u64(seed), out: String::new(), ints: Vec::new(), floats: Vec::new(), next: 0 };
    for _ in 0..items {
        g.item();
    }
    if g.ints.is_empty() {
        g.try_item(1);
    }
    let body = match g.pick_low(-100) {
        Some(y) if g.rng.gen_bool(0.5) => {
            let header = format!("main : {{v : int | always (v >= {})}} =\n", y.low.unwrap());
            g.out.insert_str(0, &header);
            y.name
        }
        _ => {
            let k = g.rng.gen_range(1..=3).min(g.ints.len());
            let names: Vec<String> = g.ints.choose_multiple(&mut g.rng, k).map(|s| s.name.clone()).collect();
            if names.len() == 1 {
                names[0].clone()
            } else {
                format!("({})", names.join(", "))
            }
        }
    };
    let tail = if g.rng.gen_bool(0.2) {
        let y = g.pick();
        format!("{body} models robot_str \"out\" {}", y.name)
    } else {
        body
    };
    let mut src = String::new();
    for (name, def) in FUNS {
        if g.out.contains(&format!(" {name} (")) {
            src.push_str(def);
            src.push('\n');
        }
    }
    format!("{src}{}{tail}\n", g.out)
}

/// A program with 1 to 5 bindings.
pub fn program(seed: u64) -> String {
    let items = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed).gen_range(1..=5);
    program_with(seed, items)
}
