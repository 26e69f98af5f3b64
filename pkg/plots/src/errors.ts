/** Error taxonomy for CSV loading and figure rendering. */

/** A CSV (or a figure request against one) violates the bench schema. */
export class SchemaError extends Error {
  /** Name of the offending column. */
  readonly column: string;

  constructor(column: string, message: string) {
    super(message);
    this.name = "SchemaError";
    this.column = column;
  }
}

/** A figure was requested over a run with zero rows. */
export class NoDataError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "NoDataError";
  }
}

/** A figure spec is self-inconsistent (e.g. duplicate run labels). */
export class SpecError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SpecError";
  }
}
