pub use theta_deriv::golden::entries as golden;
