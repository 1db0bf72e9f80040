pub mod analysis;
pub mod corpus;
pub mod encode;
pub mod gen;
pub mod monomorph;
pub mod normalize;
pub mod oracle;
pub mod stats;
pub mod subst;
pub mod syntax;
pub mod tptp;
pub mod typing;
pub mod vars;
