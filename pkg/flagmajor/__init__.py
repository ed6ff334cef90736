"""Perfect bases and flag major index for the complex reflection groups G(r,p,n)."""
