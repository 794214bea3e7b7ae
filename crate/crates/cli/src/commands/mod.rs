pub mod counterexample;
pub mod figure1;
pub mod shoot;
pub mod stability;
pub mod steady;
pub mod verify;
