#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod deform;
pub mod exactlin;
pub mod groups;
pub mod mckay;
pub mod poisson;
pub mod schouten;
pub mod verify;
