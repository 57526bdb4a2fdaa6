export class BundleInvalid extends Error {
  constructor(message: string) {
    super(message);
    this.name = "BundleInvalid";
  }
}

export class BackendUnavailable extends Error {
  constructor(message: string) {
    super(message);
    this.name = "BackendUnavailable";
  }
}
