//! Built-in presentations used by tests, benches and the CLI.

use crate::presentation::{parse_presentation, Presentation};

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub text: &'static str,
    /// Expected to satisfy C'(1/6).
    pub small_cancellation: bool,
}

impl CorpusEntry {
    pub fn presentation(&self) -> Presentation {
        parse_presentation(self.text).expect("corpus entries parse")
    }
}

macro_rules! entry {
    ($name:expr, $sc:expr, $text:expr) => {
        CorpusEntry { name: $name, text: $text, small_cancellation: $sc }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    entry!("free2", true, "gens: a b\n"),
    entry!("free3", true, "gens: a b c\n"),
    entry!("integers", true, "gens: a\n"),
    entry!("genus2", true, "gens: a b c d\nrel: abABcdCD\n"),
    entry!("genus3", true, "gens: a b c d e f\nrel: abABcdCDefEF\n"),
    entry!("abc", true, "gens: a b c\nrel: abc\n"),
    entry!("two13", true, "gens: a b\nrel: abaBBBabbaaBa\n"),
    entry!("two14", true, "gens: a b\nrel: BaBBABBBabaBAA\n"),
    entry!("two15", true, "gens: a b\nrel: AbbaBAbAbaabbAA\n"),
    entry!("two16", true, "gens: a b\nrel: ABBAbABaababAbbA\n"),
    entry!("two17", true, "gens: a b\nrel: abAbABBAAAbbAABab\n"),
    entry!("two18", true, "gens: a b\nrel: aaBaBAABBababbbABa\n"),
    entry!("three10a", true, "gens: a b c\nrel: ACCaBcbCAB\n"),
    entry!("three10b", true, "gens: a b c\nrel: ACCaBcbCBA\n"),
    entry!("three11a", true, "gens: a b c\nrel: caaCabcBBac\n"),
    entry!("three11b", true, "gens: a b c\nrel: caaCabcBBaB\n"),
    entry!("three12a", true, "gens: a b c\nrel: bAbcAcBAACCb\n"),
    entry!("three12b", true, "gens: a b c\nrel: bAbcAcBAABBc\n"),
    entry!("pair7x8", true, "gens: a b c\nrel: ccAbAca\nrel: CbbCBAAB\n"),
    entry!("pair7x7", true, "gens: a b c\nrel: AAccBCB\nrel: BaCbaca\n"),
    entry!("z2", false, "gens: a b\nrel: abAB\n"),
    entry!("trefoil", false, "gens: a b\nrel: aaaBBB\n"),
    entry!("bs12", false, "gens: a b\nrel: abABB\n"),
    entry!("square", true, "gens: a b\nrel: abab\n"),
    entry!("klein", false, "gens: a b\nrel: abAb\n"),
];

pub fn by_name(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

/// Entries satisfying C'(1/6).
pub fn small_cancellation() -> impl Iterator<Item = &'static CorpusEntry> {
    CORPUS.iter().filter(|e| e.small_cancellation)
}

/// Entries whose relators are C'(1/9).
pub fn one_ninth() -> impl Iterator<Item = &'static CorpusEntry> {
    CORPUS.iter().filter(|e| e.name.starts_with("three") || e.name == "genus3" || e.name == "abc")
}
