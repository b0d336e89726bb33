pub mod arnold;
pub mod braids;
pub mod gc;
pub mod graphs;
pub mod lie;
pub mod linalg;
pub mod moduli;
pub mod scalar;
pub mod selfcheck;
pub mod weights;
pub mod words;
