"""Request/response models for the HTTP service and the CLI client."""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator


class GeometryParams(BaseModel):
    a: float = Field(6.0, gt=0, description="wall position; walls at +/-a")
    b: float = Field(2.0, gt=0, description="half-width of the well+barrier block")
    v0: float = Field(0.0, ge=0, description="well depth / barrier height")

    @model_validator(mode="after")
    def _check_geometry(self):
        if not self.b < self.a:
            raise ValueError(f"geometry requires 0 < b < a, got a={self.a}, b={self.b}")
        return self


class SpectrumParams(GeometryParams):
    n_states: int | None = Field(None, ge=1)
    e_max: float | None = None

    @model_validator(mode="after")
    def _check_request(self):
        if self.n_states is not None and self.e_max is not None:
            raise ValueError("set at most one of n_states / e_max")
        return self

    def resolved_n_states(self) -> int | None:
        if self.n_states is None and self.e_max is None:
            return 6
        return self.n_states


class SpectrumRow(BaseModel):
    index: int
    energy: float
    kind: str
    nodes: int
    uncertainty: float


class SpectrumResponse(BaseModel):
    schema_version: int = 1
    params: SpectrumParams
    rows: list[SpectrumRow]
    max_offdiag_overlap: float
    max_c1_residual: float


class SpecialParams(GeometryParams):
    condition: str = Field("f", pattern="^(f|g|both)$")
    count: int = Field(4, ge=1)


class SpecialRow(BaseModel):
    condition: str
    index: int
    v0: float
    f_residual: float | None = None
    g_residual: float | None = None
    paired_index: int | None = None
    paired_v0: float | None = None


class SpecialResponse(BaseModel):
    schema_version: int = 1
    params: SpecialParams
    rows: list[SpecialRow]


class WavefunctionParams(SpectrumParams):
    state_index: int = Field(0, ge=0)
    samples: int = Field(1200, ge=2)


class WavefunctionMeta(BaseModel):
    index: int
    energy: float
    kind: str
    nodes: int
    norm_constant: float
    uncertainty: float


class WavefunctionRow(BaseModel):
    x: float
    psi: float


class WavefunctionResponse(BaseModel):
    schema_version: int = 1
    params: WavefunctionParams
    meta: WavefunctionMeta
    rows: list[WavefunctionRow]


class OracleParams(SpectrumParams):
    grid_n: int = Field(8000, ge=64, description="finest grid; runs at n/4, n/2, n")


class OracleRow(BaseModel):
    grid_n: int  # 0 marks the Richardson-extrapolated row
    index: int
    eigenvalue: float
    deviation: float | None = None  # analytic - value, when an analytic partner exists
    ratio: float | None = None      # convergence ratio, extrapolated rows only


class OracleResponse(BaseModel):
    schema_version: int = 1
    params: OracleParams
    rows: list[OracleRow]
    matched: bool
    unmatched_analytic: list[float]
    unmatched_oracle: list[float]


class TableParams(BaseModel):
    a: float = Field(6.0, gt=0)
    b: float = Field(2.0, gt=0)

    @model_validator(mode="after")
    def _check_geometry(self):
        if not self.b < self.a:
            raise ValueError(f"geometry requires 0 < b < a, got a={self.a}, b={self.b}")
        return self


class TableRow(BaseModel):
    row_id: int
    level: str              # "E0".."E5" or "E<k>*" for the trailing column
    v0_nominal: float
    v0_used: float
    reference: str          # printed value, "0" or "V0"
    computed: float
    deviation: float
    kind: str
    ok: bool


class TableResponse(BaseModel):
    schema_version: int = 1
    params: TableParams
    rows: list[TableRow]
    extra_states: list[str]   # computed levels absent from the printed table
    max_abs_deviation: float
    all_ok: bool
