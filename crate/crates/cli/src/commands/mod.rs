pub mod bench;
pub mod estimate;
pub mod simulate;
pub mod verify;
