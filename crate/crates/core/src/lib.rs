pub mod derive;
pub mod extract;
pub mod io;
pub mod metrics;
pub mod model;
pub mod par;
pub mod partition;
pub mod query;
pub mod rank;
pub mod similar;
