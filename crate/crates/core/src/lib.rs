pub mod exactalg;
pub mod criteria;
pub mod aim;
pub mod heun;
pub mod batch;
pub mod solve;
pub mod applications;
pub mod analysis;
pub mod corpus;
pub mod cli;
