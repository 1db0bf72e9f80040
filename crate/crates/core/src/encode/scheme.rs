use super::args::ArgFilter;
use super::protect::{Flavor, Protection};
use std::fmt;

/// The encodings, independent of level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Erased,
    Args(ArgFilter),
    TagsTrad,
    GuardsTrad,
    TagsCover,
    GuardsCover,
    TagsLight,
    TagsFeather,
    GuardsLight,
    GuardsFeather,
}

/// A scheme at a level; `mono` picks the monomorphic variants of the
/// monotonicity-based encodings, which run without a type-argument stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SchemeId {
    pub scheme: Scheme,
    pub mono: bool,
}

/// One step of a pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Protect(Protection, Flavor),
    Args(ArgFilter),
    Erase,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Protect(p, fl) => {
                let base = match p {
                    Protection::Tags => "t",
                    Protection::Guards => "g",
                };
                let suffix = match fl {
                    Flavor::Traditional => "",
                    Flavor::Cover => "@",
                    Flavor::Light => "?",
                    Flavor::Feather => "??",
                };
                write!(f, "{base}{suffix}")
            }
            Stage::Args(x) => write!(f, "a^{x}"),
            Stage::Erase => f.write_str("e"),
        }
    }
}

const NAMES: [(&str, Scheme); 12] = [
    ("e", Scheme::Erased),
    ("a", Scheme::Args(ArgFilter::Full)),
    ("a_phan", Scheme::Args(ArgFilter::Phantom)),
    ("a_ninf", Scheme::Args(ArgFilter::NonInferable)),
    ("t", Scheme::TagsTrad),
    ("g", Scheme::GuardsTrad),
    ("t_at", Scheme::TagsCover),
    ("g_at", Scheme::GuardsCover),
    ("t_q", Scheme::TagsLight),
    ("t_qq", Scheme::TagsFeather),
    ("g_q", Scheme::GuardsLight),
    ("g_qq", Scheme::GuardsFeather),
];

impl Scheme {
    pub fn name(self) -> &'static str {
        NAMES.iter().find(|(_, s)| *s == self).map(|(n, _)| *n).unwrap_or("a_none")
    }

    pub fn names() -> impl Iterator<Item = &'static str> {
        NAMES.iter().map(|(n, _)| *n)
    }

    pub fn from_name(name: &str) -> Option<Scheme> {
        NAMES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
    }

    fn has_mono_variant(self) -> bool {
        matches!(
            self,
            Scheme::Erased | Scheme::TagsLight | Scheme::TagsFeather | Scheme::GuardsLight | Scheme::GuardsFeather
        )
    }

    fn protector(self) -> Option<(Protection, Flavor)> {
        Some(match self {
            Scheme::TagsTrad => (Protection::Tags, Flavor::Traditional),
            Scheme::GuardsTrad => (Protection::Guards, Flavor::Traditional),
            Scheme::TagsCover => (Protection::Tags, Flavor::Cover),
            Scheme::GuardsCover => (Protection::Guards, Flavor::Cover),
            Scheme::TagsLight => (Protection::Tags, Flavor::Light),
            Scheme::TagsFeather => (Protection::Tags, Flavor::Feather),
            Scheme::GuardsLight => (Protection::Guards, Flavor::Light),
            Scheme::GuardsFeather => (Protection::Guards, Flavor::Feather),
            Scheme::Erased | Scheme::Args(_) => return None,
        })
    }
}

impl SchemeId {
    pub fn poly(scheme: Scheme) -> SchemeId {
        SchemeId { scheme, mono: false }
    }

    /// Fails for schemes without a monomorphic variant.
    pub fn mono(scheme: Scheme) -> Option<SchemeId> {
        scheme.has_mono_variant().then_some(SchemeId { scheme, mono: true })
    }

    pub fn parse(name: &str, mono: bool) -> Result<SchemeId, String> {
        let scheme = Scheme::from_name(name).ok_or_else(|| {
            format!("unknown scheme `{name}`; valid schemes: {}", Scheme::names().collect::<Vec<_>>().join(", "))
        })?;
        if mono {
            SchemeId::mono(scheme).ok_or_else(|| {
                format!("scheme `{name}` has no monomorphic variant; use one of e, t_q, t_qq, g_q, g_qq")
            })
        } else {
            Ok(SchemeId::poly(scheme))
        }
    }

    /// Every scheme, polymorphic variants first.
    pub fn all() -> Vec<SchemeId> {
        let mut out: Vec<SchemeId> = NAMES.iter().map(|(_, s)| SchemeId::poly(*s)).collect();
        out.extend(NAMES.iter().filter_map(|(_, s)| SchemeId::mono(*s)));
        out
    }

    /// Schemes that preserve satisfiability in both directions.
    pub fn is_sound(self) -> bool {
        self.scheme.protector().is_some()
    }

    pub fn stages(self) -> Vec<Stage> {
        let mut out = Vec::new();
        if let Some((p, f)) = self.scheme.protector() {
            out.push(Stage::Protect(p, f));
        }
        if !self.mono {
            let filter = match self.scheme {
                Scheme::Erased => None,
                Scheme::Args(x) => Some(x),
                Scheme::TagsTrad => Some(ArgFilter::Phantom),
                Scheme::GuardsTrad | Scheme::TagsCover | Scheme::GuardsCover => Some(ArgFilter::NonInferable),
                _ => Some(ArgFilter::Full),
            };
            out.extend(filter.map(Stage::Args));
        }
        out.push(Stage::Erase);
        out
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mono {
            write!(f, "{} (mono)", self.scheme.name())
        } else {
            f.write_str(self.scheme.name())
        }
    }
}
