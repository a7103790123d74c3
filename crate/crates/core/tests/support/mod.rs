#![allow(dead_code)]
pub mod arrangement;
pub mod oracle;
