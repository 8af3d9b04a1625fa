//! Bundled example programs. Every good program verifies; every mutation
//! carries one injected bug and fails verification.

use crate::ast::Program;
use crate::syntax::{parse_program, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Good,
    /// A copy of the named program with one injected bug.
    Mutation { of: &'static str },
}

#[derive(Debug, Clone, Copy)]
pub struct Example {
    pub name: &'static str,
    pub kind: Kind,
    pub source: &'static str,
}

impl Example {
    pub fn is_good(&self) -> bool {
        self.kind == Kind::Good
    }

    pub fn program(&self) -> Result<Program, ParseError> {
        parse_program(self.source)
    }

    /// The leading comment block, joined into one line.
    pub fn summary(&self) -> String {
        let lines: Vec<&str> = self
            .source
            .lines()
            .map_while(|l| l.strip_prefix("--"))
            .map(str::trim)
            .collect();
        let mut s = String::new();
        for l in lines {
            if l.is_empty() {
                break;
            }
            if !s.is_empty() {
                s.push(' ');
            }
            s.push_str(l);
        }
        s
    }
}

macro_rules! example {
    ($name:literal) => {
        Example { name: $name, kind: Kind::Good, source: include_str!(concat!("../corpus/", $name, ".mrv")) }
    };
    ($name:literal, $of:literal) => {
        Example {
            name: $name,
            kind: Kind::Mutation { of: $of },
            source: include_str!(concat!("../corpus/", $name, ".mrv")),
        }
    };
}

pub const EXAMPLES: &[Example] = &[
    example!("counter"),
    example!("tank"),
    example!("collision"),
    example!("collision_stationary"),
    example!("collision_crawl"),
    example!("nested_delay"),
    example!("pi"),
    example!("square"),
    example!("square_neg"),
    example!("counter_broken", "counter"),
    example!("counter_down_broken", "counter"),
    example!("tank_broken", "tank"),
    example!("collision_broken", "collision"),
    example!("collision_stationary_broken", "collision_stationary"),
    example!("collision_crawl_broken", "collision_crawl"),
    example!("nested_delay_broken", "nested_delay"),
    example!("pi_broken", "pi"),
    example!("square_broken", "square"),
    example!("succ_neg_broken", "square_neg"),
];

pub fn get(name: &str) -> Option<&'static Example> {
    let name = name.strip_suffix(".mrv").unwrap_or(name);
    EXAMPLES.iter().find(|e| e.name == name)
}

pub fn good() -> impl Iterator<Item = &'static Example> {
    EXAMPLES.iter().filter(|e| e.is_good())
}

pub fn mutations() -> impl Iterator<Item = &'static Example> {
    EXAMPLES.iter().filter(|e| !e.is_good())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::check_program;

    #[test]
    fn all_parse_and_check() {
        for e in EXAMPLES {
            let p = e.program().unwrap_or_else(|err| panic!("{}: {err}", e.name));
            check_program(&p).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(!e.summary().is_empty(), "{}", e.name);
        }
    }

    #[test]
    fn mutations_point_at_good_programs() {
        for e in mutations() {
            let Kind::Mutation { of } = e.kind else { unreachable!() };
            assert!(get(of).is_some_and(Example::is_good), "{}", e.name);
        }
        assert_eq!(get("tank.mrv").unwrap().name, "tank");
    }

    #[test]
    fn every_file_is_listed() {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
        let mut files: Vec<String> = std::fs::read_dir(dir)
            .unwrap()
            .filter_map(|f| f.ok()?.file_name().to_str()?.strip_suffix(".mrv").map(str::to_string))
            .collect();
        files.sort();
        let mut listed: Vec<String> = EXAMPLES.iter().map(|e| e.name.to_string()).collect();
        listed.sort();
        assert_eq!(files, listed);
    }
}
