pub mod evaluate;
pub mod explain;
pub mod inspect;
pub mod train;
