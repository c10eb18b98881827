pub mod curves;
pub mod eval_mse;
pub mod fit;
pub mod simulate;
pub mod table1;
